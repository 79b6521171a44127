from setuptools import setup, find_packages

setup(
    name="PyRelay",
    version="0.0.1",
    description="Relay placement by Log-Euclidean graph objectives, and geometric relay beamforming",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests"]),
    install_requires=[
        "numpy",
        "numba",
        "scipy",
        "scikit-learn",
        "tqdm",
        "joblib",
    ],
    extras_require={
        "dev": [
            "pytest",
            "hypothesis",
            "black",
            "ruff",
        ],
    },
    entry_points={
        "console_scripts": [
            "pyrelay=pyrelay.cli:main",
        ],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
    ],
)
