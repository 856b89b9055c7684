# Copyright (c) OpenMMLab. All rights reserved.
import argparse

import matplotlib.pyplot as plt
import numpy as np

from mlzsl.apis import load_table_csv, summarize

try:
    import seaborn as sns
except ImportError:
    sns = None

# column, title, take the complement
CRITERIA = [('hamming', 'Hamming loss', False),
            ('microf1', '1 - MicroF1', True),
            ('rankloss', 'Ranking loss', False),
            ('ap', '1 - Average precision', True)]


def plot_benchmark(summary, args):
    if args.backend is not None:
        plt.switch_backend(args.backend)
    if sns is not None:
        sns.set_style(args.style)
    methods = list(dict.fromkeys(s['method'] for s in summary))
    settings = list(dict.fromkeys(s['selftrain'] for s in summary))
    lookup = {(s['method'], s['selftrain']): s for s in summary}
    width = 0.8 / len(settings)
    xs = np.arange(len(methods))

    fig, axes = plt.subplots(
        1, len(CRITERIA), figsize=(4 * len(CRITERIA), 4), sharey=False)
    for ax, (col, title, complement) in zip(axes, CRITERIA):
        for i, setting in enumerate(settings):
            means, stds = [], []
            for method in methods:
                entry = lookup.get((method, setting))
                if entry is None:
                    means.append(np.nan)
                    stds.append(0.0)
                    continue
                value = entry[col]
                means.append(1 - value if complement else value)
                stds.append(entry[f'{col}_std'])
            ax.bar(
                xs + (i - (len(settings) - 1) / 2) * width,
                means,
                width,
                yerr=stds,
                capsize=2,
                label=f'self-training {setting}')
        ax.set_title(title)
        ax.set_xticks(xs)
        ax.set_xticklabels(methods, rotation=45, ha='right')
    axes[0].legend()
    if args.title is not None:
        fig.suptitle(args.title)
    fig.tight_layout()
    if args.out is None:
        plt.show()
    else:
        print(f'save figure to: {args.out}')
        plt.savefig(args.out)
        plt.close(fig)


def parse_args():
    parser = argparse.ArgumentParser(
        description='Plot the seed means of a `zsml compare` CSV; smaller '
        'is better for every panel')
    parser.add_argument('csv', help='benchmark CSV written by compare')
    parser.add_argument('--title', type=str, help='title of figure')
    parser.add_argument(
        '--backend', type=str, default=None, help='backend of plt')
    parser.add_argument(
        '--style', type=str, default='whitegrid', help='style of sns')
    parser.add_argument('--out', type=str, default=None)
    return parser.parse_args()


def main():
    args = parse_args()
    summary = summarize(load_table_csv(args.csv))
    for s in summary:
        print(f'{s["method"]:>20s} selftrain={s["selftrain"]:<3s} '
              f'hamming={s["hamming"]:.4f} rankloss={s["rankloss"]:.4f} '
              f'seeds={s["n_seeds"]}')
    plot_benchmark(summary, args)


if __name__ == '__main__':
    main()
