#!/usr/bin/env python3
"""
Setup script for gm, the Gauss-Manin connection calculator
"""

from setuptools import setup

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

with open("requirements.txt", "r", encoding="utf-8") as fh:
    requirements = [line.strip() for line in fh if line.strip() and not line.startswith("#")]

setup(
    name="gauss-manin",
    version="1.0.0",
    author="gm developers",
    description="Milnor numbers, Brieskorn lattices and Gauss-Manin connections of isolated hypersurface singularities",
    long_description=long_description,
    long_description_content_type="text/markdown",
    py_modules=[
        "brieskorn",
        "config",
        "connection",
        "diff_forms",
        "errors",
        "gm_service",
        "local_basis",
        "main",
        "poly_parser",
        "report",
        "series_core",
    ],
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.9",
    install_requires=requirements,
    extras_require={"test": ["pytest>=7.0"]},
    entry_points={
        "console_scripts": [
            "gm=main:main",
        ],
    },
)
