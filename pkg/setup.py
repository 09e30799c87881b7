from setuptools import find_packages, setup

__version__ = "0.1.0"
PACKAGE_NAME = "mvlab"

with open("README.md") as f:
    LONG_DESCRIPTION = f.read()

setup(
    name=PACKAGE_NAME,
    version=__version__,
    author="",
    author_email="",
    description="Multiview geometry with exact rational and floating point arithmetic",
    long_description=LONG_DESCRIPTION,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    include_package_data=True,
    python_requires=">=3.9",
    install_requires=[
        "numpy >= 1.20",
        "prettytable >= 3.9.0",
        "pydantic >= 2.7.2",
        "scipy >= 1.9",
        "sympy >= 1.12",
    ],
    extras_require={
        ':python_version < "3.11"': ["StrEnum >= 0.4.15"],
        "Dev": ["pytest>=7.4.0", "pytest-cov>=4.1.0", "ruff>=0.4.10"],
    },
    entry_points={"console_scripts": ["mvlab = mvlab.cli:main"]},
    zip_safe=False,
)
