# Copyright (c) OpenMMLab. All rights reserved.
import sys

from mlzsl.apis import cli_dispatch

if __name__ == '__main__':
    sys.exit(cli_dispatch(sys.argv[1:]))
