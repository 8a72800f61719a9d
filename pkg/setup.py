from setuptools import setup, find_packages

packages = find_packages(exclude=('test', 'test.*'))
setup(
    name='rispaces',
    version='0.1.0',
    author='The rispaces Authors',
    description='norms, isometries and classification checks for rearrangement-invariant spaces',
    long_description=open('README.md').read(),
    long_description_content_type='text/markdown',
    python_requires='>=3.7',
    install_requires=['numpy>=1.16', 'scipy>=1.2'],
    packages=packages,
    package_dir={'rispaces': 'rispaces'},
    entry_points={'console_scripts': ['rispaces=rispaces.cli:main']},
    zip_safe=False,
)
