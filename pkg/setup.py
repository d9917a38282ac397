from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="transducersim",
    version="0.1.0",
    author="transducersim contributors",
    description="Efficiency and thermal added noise of superconducting electro-optic transducers",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    python_requires=">=3.9",
    install_requires=[
        "python-dotenv>=1.0.0",
        "pyyaml>=6.0",
        "click>=8.0.0",
        "numpy>=1.24",
        "scipy>=1.10",
        "pandas>=2.0",
        "pint>=0.22",
    ],
    extras_require={
        "dev": [
            "pytest>=7.4.0",
            "pytest-cov>=4.1.0",
            "mpmath>=1.3.0",
            "black>=23.0.0",
            "flake8>=6.0.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "transducer-sim=transducersim.cli:main",
        ],
    },
)
