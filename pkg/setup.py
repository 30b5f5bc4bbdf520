from setuptools import find_packages, setup

setup(
    name='gamma_integration_scripts',
    version='0.0.1',
    py_modules=['harness_scripts'],
    packages=find_packages(exclude=['tests']),
    install_requires=[
        'Click',
        'pyyaml',
        'numpy>=1.22',
        'scipy>=1.7',
    ],
    extras_require={
        'test': ['pytest', 'hypothesis'],
    },
    entry_points='''
        [console_scripts]
        gamma_scripts=harness_scripts:main
    ''',
)
