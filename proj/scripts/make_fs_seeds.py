#!/usr/bin/env python3
# Copyright (c) provtrail contributors.
# SPDX-License-Identifier: MIT
"""Regenerates the bundled fs seed corpus (fixtures/fs-seeds).

The 50 seeds instantiate a dozen hand-written scenarios over rotating path
segments, so together they exercise every operation of the fs SUT, both the
happy paths and the error branches. The output is deterministic; the files
are committed, so running this script is only needed when the scenarios
change.
"""

import itertools
import os

SEGS = ["a", "b", "c", "d"]


def scenarios(x, y, z, w):
    """Yields (name-suffix, [actions]) for one segment assignment."""
    X, Y, Z, W = f"/{x}", f"/{x}/{y}", f"/{x}/{y}/{z}", f"/{x}/{y}/{z}/{w}"
    A, B = f"/{y}", f"/{z}"
    yield "dirs", [
        f'fs.mkdir("{X}")',
        f'fs.mkdir("{Y}")',
        f'fs.rmdir("{Y}")',
        f'fs.rmdir("{X}")',
        f'fs.rmdir("{X}")',
    ]
    yield "deepfile", [
        f'fs.makedirs("{Z}")',
        f'fs.open("{W}")',
        f'fs.write("{W}")',
        f'fs.write("{W}")',
        f'fs.close("{W}")',
        f'fs.remove("{W}")',
    ]
    yield "mkdirerr", [
        f'fs.mkdir("{Y}")',
        f'fs.mkdir("{X}")',
        f'fs.mkdir("{X}")',
        f'fs.makedirs("{X}")',
        f'fs.rmdir("{X}")',
    ]
    yield "busydir", [
        f'fs.mkdir("{X}")',
        f'fs.open("{Y}")',
        f'fs.rmdir("{X}")',
        f'fs.rmdir("{Y}")',
        f'fs.close("{Y}")',
        f'fs.remove("{Y}")',
        f'fs.rmdir("{X}")',
    ]
    yield "removeerr", [
        f'fs.remove("{X}")',
        f'fs.mkdir("{X}")',
        f'fs.remove("{X}")',
        f'fs.open("{A}")',
        f'fs.remove("{A}")',
    ]
    yield "renametree", [
        f'fs.makedirs("{Y}")',
        f'fs.open("{Z}")',
        f'fs.close("{Z}")',
        f'fs.rename("{Y}","/{w}")',
        f'fs.open("/{w}/{z}")',
        f'fs.close("/{w}/{z}")',
    ]
    yield "renameerr", [
        f'fs.rename("{X}","{A}")',
        f'fs.mkdir("{X}")',
        f'fs.mkdir("{A}")',
        f'fs.rename("{X}","{A}")',
        f'fs.rename("{X}","{Y}")',
        f'fs.rename("{X}","/{z}/{w}")',
    ]
    yield "linkfile", [
        f'fs.mkdir("{X}")',
        f'fs.open("{Y}")',
        f'fs.close("{Y}")',
        f'fs.symlink("{Y}","{A}")',
        f'fs.open("{A}")',
        f'fs.write("{A}")',
        f'fs.close("{A}")',
        f'fs.remove("{A}")',
    ]
    yield "danglink", [
        f'fs.symlink("{Y}","{A}")',
        f'fs.open("{A}")',
        f'fs.mkdir("{X}")',
        f'fs.open("{A}")',
        f'fs.close("{A}")',
        f'fs.remove("{Y}")',
    ]
    yield "linkerr", [
        f'fs.symlink("{X}","{A}")',
        f'fs.symlink("{B}","{A}")',
        f'fs.symlink("{X}","/{y}/{z}")',
        f'fs.symlink("{A}","{B}")',
        f'fs.open("{B}")',
    ]
    yield "writeerr", [
        f'fs.write("{X}")',
        f'fs.mkdir("{X}")',
        f'fs.write("{X}")',
        f'fs.open("{X}")',
        f'fs.open("{Y}")',
        f'fs.open("{Y}")',
        f'fs.write("{Y}")',
        f'fs.close("{Y}")',
        f'fs.write("{Y}")',
        f'fs.close("{Y}")',
    ]
    yield "noparent", [
        f'fs.open("{Z}")',
        f'fs.makedirs("{Y}")',
        f'fs.open("{Z}")',
        f'fs.write("{Z}")',
        f'fs.close("{Z}")',
        f'fs.makedirs("{W}")',
    ]


def main():
    out_dir = os.path.join(os.path.dirname(__file__), "..", "fixtures", "fs-seeds")
    os.makedirs(out_dir, exist_ok=True)
    pool = []
    for perm in itertools.permutations(SEGS):
        for _, actions in scenarios(*perm):
            pool.append(actions)
    # Stride 5 is coprime to the 12 scenarios per permutation, so the first
    # 50 picks cycle through every scenario under varied segment choices.
    tests = [pool[(5 * n) % len(pool)] for n in range(50)]
    for index, actions in enumerate(tests):
        width = max(max(len(a) for a in actions) + 1, 28)
        iw = len(str(len(actions) - 1))
        lines = [f"{a:<{width}}# STEP {i:<{iw}}".rstrip() for i, a in enumerate(actions)]
        name = f"seed{index:02}.test"
        with open(os.path.join(out_dir, name), "w") as f:
            f.write("\n".join(lines) + "\n")
    print(f"wrote {len(tests)} seeds to {out_dir}")


if __name__ == "__main__":
    main()
