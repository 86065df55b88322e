from setuptools import setup, find_packages

setup(
    name="qrtecm",
    version="0.1.0",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    python_requires=">=3.10",
    install_requires=[
        "pydantic>=2.5.0",
        "numpy>=1.24.0",
        "python-dotenv>=1.0.0",
        "tenacity>=8.2.0",
        "prometheus-client>=0.17.0",
        "gmpy2>=2.1.5",  # multiprecision integers and rationals
        "click>=8.1.0",
    ],
    extras_require={
        'dev': [
            'pytest>=7.4.0',
            'pytest-asyncio>=0.21.0',
            'pytest-cov>=4.1.0',
            'hypothesis>=6.90.0',
            'black>=23.9.1',
            'isort>=5.12.0',
            'mypy>=1.5.1',
        ]
    },
    entry_points={
        "console_scripts": ["qrtecm=qrtecm.cli:run"],
    },
    author="QRT-ECM Team",
    author_email="team@example.com",
    description="Stage-1 elliptic curve factorisation on Somos-4, Somos-5 and Lyness maps",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
