#!/usr/bin/env python
# -*- coding: utf-8 -*-

import sys

try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup


with open('README.rst') as readme_file:
    readme = readme_file.read()

with open('HISTORY.rst') as history_file:
    history = history_file.read().replace('.. :changelog:', '')

try:
    import rstcheck
    found_errors = False

    readme_errors = list(rstcheck.check(readme))
    if len(readme_errors) > 0:
        sys.stderr.write('\nErrors in README.rst [(line #, error)]\n' +
                         str(readme_errors) + '\n')
        found_errors = True

    history_errors = list(rstcheck.check(history))
    if len(history_errors) > 0:
        sys.stderr.write('\nErrors in HISTORY.rst [(line #, error)]\n' +
                         str(history_errors) + '\n')

        found_errors = True

    if 'sdist' in sys.argv or 'bdist_wheel' in sys.argv:
        if found_errors is True:
            sys.stderr.write('\n\nEXITING due to errors encountered in'
                             ' History.rst or Readme.rst.\n\nSee errors above\n\n')
            sys.exit(1)

except Exception as e:
    sys.stderr.write('WARNING: rstcheck library found, '
                     'unable to validate README.rst or HISTORY.rst\n')


requirements = [
    "argparse",
    "lockfile",
    "psutil",
    "numpy>=1.17",
    "scipy",
    "xlsxwriter",
    "configparser"
]

test_requirements = [
    "argparse",
    "lockfile",
    "psutil",
    "numpy>=1.17",
    "scipy",
    "xlsxwriter",
    "configparser",
    "mock"
]

setup(
    name='ta3n',
    version='0.1.0',
    description='Temporal attentive adversarial adaptation network runner '
                'for unsupervised video domain adaptation on per frame '
                'features',
    long_description=readme + '\n\n' + history,
    author='ta3n developers',
    author_email='ta3n-dev@users.noreply.github.com',
    packages=[
        'ta3n', 'ta3n.autodiff', 'ta3n.model', 'ta3n.data', 'ta3n.train',
        'ta3n.evaluation', 'ta3n.pipeline'
    ],
    package_dir={'ta3n':
                 'ta3n'},
    include_package_data=True,
    install_requires=requirements,
    license="BSD",
    zip_safe=False,
    keywords='ta3n domain adaptation video',
    classifiers=[
        'Development Status :: 2 - Pre-Alpha',
        'Intended Audience :: Science/Research',
        'Natural Language :: English',
        'Environment :: Console',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Artificial Intelligence'
    ],
    scripts = ['ta3n/ta3nrunner.py'],
    test_suite='tests',
    tests_require=test_requirements
)
