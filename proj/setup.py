import os

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

here = os.path.dirname(os.path.abspath(__file__))

core_sources = [
    "src/space.cpp",
    "src/sampling.cpp",
    "src/group.cpp",
    "src/func.cpp",
    "src/expr.cpp",
    "src/catalog.cpp",
    "src/opt.cpp",
    "src/separation.cpp",
    "src/ekeland.cpp",
    "src/consequences.cpp",
]

eigen_include = os.environ.get("EIGEN3_INCLUDE_DIR", "/usr/include/eigen3")

ext = Pybind11Extension(
    "symvp._symvp",
    ["python/bindings.cpp"] + core_sources,
    include_dirs=[os.path.join(here, "include"), eigen_include],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
