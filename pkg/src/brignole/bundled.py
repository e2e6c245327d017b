"""Access to the fixtures shipped inside the package."""
from __future__ import annotations

import os
import shutil
from importlib import resources

from .algebra import FiniteAlgebra, load_algebra


def fixture_dir():
    return resources.files("brignole") / "fixtures"


def list_fixtures() -> list[str]:
    return sorted(p.name for p in fixture_dir().iterdir() if not p.name.startswith((".", "_")))


def fixture_path(name: str) -> str:
    p = fixture_dir() / name
    if not p.is_file():
        raise FileNotFoundError(f"no bundled fixture named {name!r}")
    return str(p)


def load_fixture(name: str) -> FiniteAlgebra:
    return load_algebra(fixture_path(name))


def resolve_path(path: str) -> str:
    """``path`` itself if it exists, else the bundled fixture of that name.

    Lets ``check fixtures/b1_fail.alg`` and ``find brignole.eqs`` work from
    any directory.
    """
    if os.path.exists(path):
        return path
    name = os.path.basename(path)
    if (fixture_dir() / name).is_file():
        return str(fixture_dir() / name)
    raise FileNotFoundError(f"no such file: {path}")


def copy_fixtures(dest: str) -> list[str]:
    os.makedirs(dest, exist_ok=True)
    out = []
    for name in list_fixtures():
        target = os.path.join(dest, name)
        shutil.copyfile(fixture_path(name), target)
        out.append(target)
    return out
