# -*- coding: utf-8 -*-
import os
from setuptools import find_packages, setup

HERE = os.path.dirname(os.path.abspath(__file__))


def parse_requirements(fname):
    """ Requirement lines of a pip requirements file, following ``-r`` includes.

    Version specifiers and environment markers are kept as written.
    Editable installs (``-e``) are skipped, as they are not package requirements.
    """
    path = os.path.join(HERE, fname)
    if not os.path.exists(path):
        return []

    requirements = []
    with open(path, 'r') as f:
        for line in f:
            line = line.split('#', 1)[0].strip()
            if not line or line.startswith('-e '):
                continue
            if line.startswith('-r '):
                include = os.path.join(os.path.dirname(fname), line[3:].strip())
                requirements.extend(parse_requirements(include))
            else:
                requirements.append(line)
    return requirements


setup(
    name='assignflow',
    description='Flow matching on the assignment manifold for discrete joint distributions',
    long_description=open(os.path.join(HERE, 'README.md')).read(),
    long_description_content_type='text/markdown',
    python_requires='>=3.8',
    # Version comes from git tags, see https://github.com/pypa/setuptools_scm/
    setup_requires=['setuptools_scm'],
    use_scm_version={
        'write_to': 'assignflow/_version.py',
        'write_to_template': '__version__ = "{version}"',
        'local_scheme': 'dirty-tag',
        'fallback_version': '0.1.0',
    },
    packages=find_packages(exclude=('test', 'test.*')),
    install_requires=parse_requirements('requirements/runtime.txt'),
    extras_require={
        'build': parse_requirements('requirements/build.txt'),
        'develop': parse_requirements('develop.txt'),
    },
    entry_points={'console_scripts': ['assignflow = assignflow.cli:main']},
    test_suite='test',
)
