"""CMake-driven build of the svrdoa extension module.

The C++ project is the source of truth; this shim just points setuptools at
the CMake target so `pip install . --no-build-isolation` works.
"""

import os
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
        source_dir = Path(__file__).parent.resolve()
        build_dir = Path(self.build_temp).resolve()
        build_dir.mkdir(parents=True, exist_ok=True)

        ext_path = Path(self.get_ext_fullpath(ext.name)).resolve()
        ext_path.parent.mkdir(parents=True, exist_ok=True)

        cmake_args = [
            f"-DCMAKE_BUILD_TYPE={os.environ.get('SVRDOA_BUILD_TYPE', 'Release')}",
            "-DSVRDOA_BUILD_PYTHON=ON",
            f"-DPython3_EXECUTABLE={sys.executable}",
        ]
        subprocess.run(["cmake", "-S", str(source_dir), "-B", str(build_dir), *cmake_args],
                       check=True)
        subprocess.run(["cmake", "--build", str(build_dir), "--target", "_core",
                        f"-j{os.cpu_count() or 2}"], check=True)

        staged = build_dir / "python" / "svrdoa"
        built = sorted(p for p in staged.iterdir() if p.suffix in {".so", ".pyd"})
        if not built:
            raise RuntimeError(f"no extension module produced under {staged}")
        ext_path.write_bytes(built[-1].read_bytes())


setup(
    packages=["svrdoa"],
    package_dir={"svrdoa": "python/svrdoa"},
    ext_modules=[CMakeExtension("svrdoa._core")],
    cmdclass={"build_ext": CMakeBuild},
    zip_safe=False,
)
