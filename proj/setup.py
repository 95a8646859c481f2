"""Builds the C++ extension through the project's CMake tree.

scikit-build-core is the cleaner backend for this layout, but it is not
reachable from every environment this repo targets, so a small custom
build_ext drives CMake directly. Use `pip install -e . --no-build-isolation`.
"""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp) / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        out_dir = Path(self.get_ext_fullpath(ext.name)).resolve().parent

        configure = [
            "cmake",
            "-S", str(source_dir),
            "-B", str(build_dir),
            "-DSKBUILD=ON",
            "-DSKFORGE_BUILD_TESTS=OFF",
            f"-DCMAKE_BUILD_TYPE={'Debug' if self.debug else 'Release'}",
            f"-DPython3_EXECUTABLE={sys.executable}",
        ]
        if shutil.which("ninja"):
            configure += ["-G", "Ninja"]
        subprocess.run(configure, check=True)
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_core", "--parallel"],
            check=True,
        )

        staged = build_dir / "python" / "skforge"
        out_dir.mkdir(parents=True, exist_ok=True)
        for lib in staged.glob("_core.*"):
            shutil.copy2(lib, out_dir / lib.name)


setup(
    ext_modules=[CMakeExtension("skforge._core")],
    cmdclass={"build_ext": CMakeBuild},
)
