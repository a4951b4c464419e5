# -*- coding: utf-8 -*-

"""The setup script."""

from setuptools import setup, find_packages

with open("README.md") as f:
    description = f.read()

setup(
    name="feec",
    author="Jose Tiago Macara Coutinho",
    author_email="coutinhotiago@gmail.com",
    classifiers=[
        "Development Status :: 2 - Pre-Alpha",
        "Intended Audience :: Science/Research",
        "Natural Language :: English",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: GNU Lesser General Public License v2 or later (LGPLv2+)"
    ],
    description="Exact rational finite element exterior calculus on simplices",
    license="LGPL-2.1",
    install_requires=["numpy>=1.17"],
    extras_require={
        "tests": ["pytest", "hypothesis"]
    },
    entry_points={
        "console_scripts": ["feec = feec.cli:main"]
    },
    long_description=description,
    long_description_content_type="text/markdown",
    keywords="finite element, exterior calculus, whitney forms, barycentric, exact arithmetic",
    packages=find_packages(exclude=["tests"]),
    version="0.1.0",
    python_requires=">=3.8",
    zip_safe=True,
)
