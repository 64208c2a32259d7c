#!/usr/bin/env python
# -*- coding: utf-8 -*-


from setuptools import find_packages

try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup


with open('README.md') as readme_file:
    readme = readme_file.read()

with open('CHANGELOG.md') as history_file:
    history = history_file.read()

requirements = ['pyyaml', 'numpy', 'scipy', 'pandas>=1.5', 'networkx', 'nltk']

setup(
    name="cpc.ontorec",
    version='v0.1.0',
    description="Ontology-backed research paper recommender",
    long_description=readme + '\n\n' + history,
    author="Mike Charles",
    author_email='mike.charles@noaa.gov',
    url="https://github.com/noaa-nws-cpc/cpc.ontorec",
    packages=find_packages(exclude=['tests', 'examples', 'examples.*']),
    include_package_data=True,
    package_data={'cpc.ontorec': ['data/*']},
    install_requires=requirements,
    tests_require=['pytest', 'pytest-cov', 'hypothesis'],
    entry_points={
        'console_scripts': ['ontorec=cpc.ontorec.cli:main'],
    },
    python_requires='>=3.9',
    license="CC",
    zip_safe=False,
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Operating System :: OS Independent',
        'Topic :: Scientific/Engineering :: Information Analysis',
        'License :: CC0 1.0 Universal (CC0 1.0) Public Domain Dedication',
    ],
)
