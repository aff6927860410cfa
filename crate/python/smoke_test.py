#!/usr/bin/env python3
"""Smoke test for the jacrank_py extension module.

Builds the cdylib with cargo, loads it directly, and checks a few known
values end to end.
"""

import json
import shutil
import subprocess
import sys
import sysconfig
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def build_module(tmp: Path) -> Path:
    subprocess.run(
        ["cargo", "build", "-p", "jacrank-py", "--release"],
        cwd=REPO,
        check=True,
    )
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    built = REPO / "target" / "release" / "libjacrank_py.so"
    if not built.exists():  # e.g. macOS
        built = REPO / "target" / "release" / "libjacrank_py.dylib"
    dest = tmp / ("jacrank_py" + suffix)
    shutil.copyfile(built, dest)
    return dest


def main() -> int:
    with tempfile.TemporaryDirectory() as d:
        tmp = Path(d)
        build_module(tmp)
        sys.path.insert(0, str(tmp))
        import jacrank_py

        deuring = json.loads(jacrank_py.deuring_json(5))
        assert deuring["coeffs"] == [1, 4, 1], deuring
        assert len(deuring["roots"]) == 2, deuring

        jac = json.loads(jacrank_py.jacobi_json(3, 7, [1, 1, 2]))
        assert jac["abs_square"] == 49, jac
        assert sorted(jac["valuations"]) == [1, 1], jac

        stick = json.loads(jacrank_py.stickelberger_json(5, 11, [1, 1, 1]))
        assert stick["d_u"] == [0, 1, 1, 2], stick
        assert stick["not_supersingular"] is True, stick

        curve = json.dumps(
            {
                "p": 7,
                "h": 1,
                "m": 3,
                "exponents": [1, 1, 2],
                "branch": [0, 1, 3],
                "base": "P1",
            }
        )
        zeta = json.loads(jacrank_py.zeta_json(curve))
        assert zeta["genus"] == 2, zeta
        assert zeta["prank"] >= 1, zeta

        prank = json.loads(jacrank_py.prank_json(curve))
        assert prank["agree"] is True, prank
        assert any(v["prank"] == zeta["prank"] for v in prank["verdicts"]), prank

        print("smoke test passed")
        return 0


if __name__ == "__main__":
    sys.exit(main())
