import os.path as osp

from setuptools import find_packages, setup


def readme():
    with open('README.md', encoding='utf-8') as f:
        return f.read()


def get_version():
    namespace = {}
    with open('mlzsl/version.py', 'r') as f:
        exec(compile(f.read(), 'mlzsl/version.py', 'exec'), namespace)
    return namespace['__version__']


def parse_requirements(fname='requirements.txt'):
    """Requirement lines of ``fname``, following ``-r`` includes."""
    if not osp.exists(fname):
        return []
    items = []
    with open(fname, 'r') as f:
        for line in f:
            line = line.split('#')[0].strip()
            if not line:
                continue
            if line.startswith('-r '):
                items.extend(parse_requirements(line.split(' ', 1)[1]))
            else:
                items.append(line)
    return items


if __name__ == '__main__':
    setup(
        name='mlzsl',
        version=get_version(),
        description='Zero-shot multi-label prediction through a semantic '
        'word space',
        long_description=readme(),
        long_description_content_type='text/markdown',
        keywords='zero-shot learning, multi-label classification, '
        'label propagation, word embeddings',
        packages=find_packages(exclude=('configs', 'tools', 'tests')),
        include_package_data=True,
        classifiers=[
            'Development Status :: 4 - Beta',
            'License :: OSI Approved :: Apache Software License',
            'Operating System :: OS Independent',
            'Programming Language :: Python :: 3',
            'Programming Language :: Python :: 3.7',
            'Programming Language :: Python :: 3.8',
            'Programming Language :: Python :: 3.9',
        ],
        license='Apache License 2.0',
        python_requires='>=3.7',
        tests_require=parse_requirements('requirements/tests.txt'),
        install_requires=parse_requirements('requirements/runtime.txt'),
        extras_require={
            'all': parse_requirements('requirements.txt'),
            'tests': parse_requirements('requirements/tests.txt'),
            'optional': parse_requirements('requirements/optional.txt'),
        },
        entry_points={
            'console_scripts': ['zsml=mlzsl.apis.cli:main'],
        },
        zip_safe=False)
