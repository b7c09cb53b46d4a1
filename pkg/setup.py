"""Setup file for paramcaption
"""
from setuptools import setup, find_packages

setup(
    name='paramcaption',
    version='0.1.0',
    description='Parametric structured captions: schema, refinement edits and evaluation',
    url='',
    packages=find_packages(exclude=['contrib', 'docs', 'tests']),
    package_data={'paramcaption': ['config/*.ini']},
    install_requires=['numpy>=1.21', 'scipy>=1.7', 'Pillow>=9.1', 'scikit-learn>=1.2', 'threadpoolctl>=3.1'],
    entry_points={'console_scripts': ['paramcaption=paramcaption.__main__:main']},
)
