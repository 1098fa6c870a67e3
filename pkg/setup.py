from setuptools import setup, find_packages

setup(
    name='liouville-motility',
    version='0.1.0',
    packages=find_packages(include=['app', 'app.*'], exclude=['app.*.tests']),
    install_requires=[
        'matplotlib',
        'mpmath',
        'numpy',
        'pandas',
        'python-dotenv',
        'scipy',
        'typing_extensions',
    ],
    entry_points={
        'console_scripts': [
            'liouville=app.scripts.cli:main',
        ],
    },
    description='Radial steady states, linearized spectra, traveling-wave bifurcation and boundary shapes '
                'for a reduced free-boundary cell-motility model.',
    classifiers=[
        'Programming Language :: Python :: 3',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
    ],
    python_requires='>=3.10',
)
