#!/usr/bin/python3

from setuptools import setup, find_packages


setup(
    name='aadbench',
    version='1.0.0',
    author='Adam Izdebski',
    packages=find_packages(exclude=['tests', 'tests.*']),
    python_requires='>=3.9',
    install_requires=[
        'numpy<2.0',
        'scipy>=1.10',
        'pandas',
        'tqdm',
        'joblib',
        'typing_extensions',
    ],
    extras_require={
        'wandb': ['wandb'],
        'test': ['pytest'],
    },
    entry_points={
        'console_scripts': ['aadbench=aadbench.cli:main'],
    },
    zip_safe=False
)
