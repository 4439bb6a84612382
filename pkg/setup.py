# -*- coding: UTF-8 -*-
"""
The setuptools base setup module. Necessary for the PyPI upload.
"""

# Always prefer setuptools over distutils
from setuptools import setup
# load version
from dwmtj_toolbox.constants import project_version
# To use a consistent encoding
from codecs import open
from os import path

here = path.abspath(path.dirname(__file__))
status = "Development Status :: "
if project_version[3].startswith("a"):
    status += "3 - Alpha"
elif project_version[3].startswith("b"):
    status += "4 - Beta"
elif project_version[3].startswith("rc") or project_version[3].startswith(""):
    status += "5 - Production/Stable"
else:
    status += "1 - Planning"

# Get the long description from the README file
with open(path.join(here, "README.md"), encoding="utf-8") as f:
    long_description = f.read()
long_description_content_type = "text/markdown"

setup(
    # $ pip install DwMtjToolbox

    name="DwMtjToolbox",
    version=".".join(project_version),
    description="Behavioural simulation of domain-wall MTJ neurons, synapses and multilayer crossbar networks.",
    long_description=long_description,  # Optional
    long_description_content_type=long_description_content_type,
    license="MIT",

    classifiers=[
        status,
        # Indicate who your project is intended for
        "Intended Audience :: Developers",
        "Intended Audience :: Science/Research",

        "License :: OSI Approved :: MIT License",

        "Programming Language :: Python :: 3.7",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",

        # other classifiers
        "Natural Language :: English",
        "Topic :: Database :: Front-Ends",
        "Topic :: Documentation :: Sphinx",
        "Topic :: Scientific/Engineering :: Physics",
        "Topic :: Scientific/Engineering :: Electronic Design Automation (EDA)",
        "Topic :: Software Development :: Libraries :: Python Modules"
    ],

    keywords="Spintronics Neuromorphic Crossbar Simulation SQLAlchemy",  # Optional

    packages=["dwmtj_toolbox", "dwmtj_toolbox.tests"],  # Required
    package_data={"dwmtj_toolbox": ["alembic.ini", "alembic/env.py", "alembic/versions/*.py",
                                    "example_configs/*.json"]},

    # This field lists other packages that your project depends on to run.
    # For an analysis of "install_requires" vs pip"s requirements files see:
    # https://packaging.python.org/en/latest/requirements.html
    install_requires=[
        "SQLAlchemy>=1.4",
        "alembic>=1.2",
        "numpy>=1.17",
        "scipy>=1.3"
    ],

    # additional groups of dependencies, e.g. $ pip install DwMtjToolbox[dev]
    extras_require={  # Optional
        "dev": ["Sphinx", "sphinxjp.themes.basicstrap", "hypothesis"]
    },

    entry_points={
        "console_scripts": ["dwmtj-sim=dwmtj_toolbox.cli:main"]
    },

    test_suite="dwmtj_toolbox.tests",

    python_requires=">=3.7"
)
