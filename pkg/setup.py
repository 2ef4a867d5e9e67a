#!/usr/bin/env python

try:
    from setuptools import setup, find_packages
except ImportError:
    raise RuntimeError('setuptools is required')

DESCRIPTION = ('tamsdld is a python library for large deviation bounds '
               'and the exact distribution of the time-averaged mean '
               'square displacement.')

LONG_DESCRIPTION = """
tamsdld computes the exact finite-sample distribution of the
time-averaged mean square displacement (TAMSD) of Brownian motion and
fractional Brownian motion, explicit large deviation upper bounds for
the TAMSD and for the anomalous diffusion exponent estimated from it,
and Monte Carlo checks of those bounds on exactly simulated paths.

The ``tamsdld`` command evaluates bounds, tabulates distributions and
runs Monte Carlo verification, writing CSV or JSON tables.
"""

DISTNAME = 'tamsdld'
AUTHOR = 'tamsdld Contributors'
LICENSE = 'MIT'

TESTS_REQUIRE = [
    'pytest',
    'pytest-cov',
    'packaging',
]

INSTALL_REQUIRES = [
    'numpy >= 1.17.0',
    'pandas >= 1.3.0',
    'scipy >= 1.6.0',
    'statsmodels >= 0.12.0',
    'importlib-metadata; python_version < "3.8"',
]

DOCS_REQUIRE = [
    'sphinx == 4.5.0',
    'pydata-sphinx-theme == 0.8.1',
    'sphinx-gallery',
    'matplotlib',
]

EXTRAS_REQUIRE = {
    'test': TESTS_REQUIRE,
    'doc': DOCS_REQUIRE
}

EXTRAS_REQUIRE['all'] = sorted(set(sum(EXTRAS_REQUIRE.values(), [])))

SETUP_REQUIRES = ['setuptools_scm']

CLASSIFIERS = [
    'Development Status :: 3 - Alpha',
    'Operating System :: OS Independent',
    'Intended Audience :: Science/Research',
    'Programming Language :: Python :: 3',
    'Topic :: Scientific/Engineering :: Mathematics',
    'Topic :: Scientific/Engineering :: Physics'
]

PACKAGES = find_packages(exclude=["*.tests", "*.tests.*", "tests.*", "tests"])

ENTRY_POINTS = {
    'console_scripts': ['tamsdld = tamsdld.cli:main'],
}

setup(
    name=DISTNAME,
    use_scm_version=True,
    packages=PACKAGES,
    install_requires=INSTALL_REQUIRES,
    extras_require=EXTRAS_REQUIRE,
    tests_require=TESTS_REQUIRE,
    setup_requires=SETUP_REQUIRES,
    entry_points=ENTRY_POINTS,
    ext_modules=[],
    description=DESCRIPTION,
    long_description=LONG_DESCRIPTION,
    author=AUTHOR,
    license=LICENSE,
    classifiers=CLASSIFIERS,
    python_requires='>=3.7',
    include_package_data=True,
)
