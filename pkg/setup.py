"""Builds the optional compiled voxel kernels.

The package works without them (a numpy fallback is selected at import);
compiling just makes voxelization faster.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [
            Extension(
                "printopt._kernels._voxel_cy",
                ["src/printopt/_kernels/_voxel_cy.pyx"],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
