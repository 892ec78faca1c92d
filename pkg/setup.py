"""
setup.py

Установка hamforge.

Использование:
    pip install -e .
    hamforge --help
"""

from setuptools import setup, find_packages

setup(
    name="hamforge",
    version="1.0.0",
    description="Compiler and certifier for perturbative Hamiltonian simulations",
    packages=find_packages(exclude=("tests", "tests.*", "examples", "examples.*")),
    py_modules=["main"],
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.26.0",
        "scipy>=1.11.0",
        "networkx>=3.2",
    ],
    extras_require={
        "fast": ["numba>=0.59.0"],
        "test": ["pytest>=9.0.0"],
    },
    entry_points={
        "console_scripts": ["hamforge=main:main"],
    },
    zip_safe=False,
)
