from setuptools import setup, find_packages

setup(
    name="staba2",
    version="0.1.0",
    packages=find_packages(include=["src", "src.*"]),
    install_requires=[
        "numpy>=1.24.0",
        "networkx>=3.1",
        "matplotlib>=3.7.0",
        "python-dotenv>=1.0.0",
        "python-json-logger>=2.0.7,<4",
    ],
    extras_require={
        "test": ["pytest>=8.0.0", "pytest-cov>=4.1.0", "scipy>=1.10.0"],
    },
    python_requires=">=3.11",
    entry_points={
        'console_scripts': [
            'staba2=src.cli.main:main',
        ],
    },
)
