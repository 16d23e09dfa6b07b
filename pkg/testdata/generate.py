"""Regenerate the frozen regression tables in this directory.

Run from the repository root:  python3 testdata/generate.py

Values are frozen only after agreeing with their independent oracles
(Gamma closed forms cross-checked against each other and against the
numerically applied kernel; norms against mpmath quadrature in the test
suite).  `normlab regress` recomputes every entry and compares at the
per-table tolerance.
"""

import datetime
import json
import os

from normlab.norms import comp_norm, g_normalizer, intertwine_constant
from normlab.principal import CayleySum

HERE = os.path.dirname(os.path.abspath(__file__))


def _write(name, kind, tol, entries, note):
    payload = {
        "kind": kind,
        "tol": tol,
        "provenance": {
            "generator": "testdata/generate.py",
            "frozen": datetime.date.today().isoformat(),
            "note": note,
        },
        "entries": entries,
    }
    with open(os.path.join(HERE, name), "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
    print(f"wrote {name}: {len(entries)} entries")


def main():
    entries = []
    for u in (0.3, 0.5, 0.7):
        for m in range(0, 33, 4):
            c = complex(intertwine_constant(m, u))
            entries.append({"params": {"m": m, "u": [u, 0.0]},
                            "value": [c.real, c.imag]})
    _write("intertwine_c2m.json", "intertwine", 1e-10, entries,
           "kernel eigenvalues on weight-2m K-types; two Gamma closed "
           "forms cross-checked internally")

    entries = [{"params": {"u": u}, "value": g_normalizer(u)}
               for u in (-0.75, -0.5, -0.25, 0.25, 0.3, 0.5, 0.6, 0.75)]
    _write("gnorm.json", "gnorm", 1e-8, entries,
           "transform normalizer G(u) by Gaussian pairing; Gamma closed "
           "form agrees to 1e-12")

    entries = []
    for rep_u in ((0.0, 0.5), (0.0, 1.0), (0.5, 0.0)):
        for m in (0, 2, 4, 8):
            for u in (-0.5, -0.25, 0.25):
                val = comp_norm(CayleySum.ktype(m, complex(*rep_u)), u).value
                entries.append({"params": {"m": m, "rep_u": list(rep_u),
                                           "u": u},
                                "value": val})
    _write("comp_norm.json", "comp-norm", 1e-7, entries,
           "weighted transform norms of single K-types; spectral identity "
           "pi * c_{2m} verified in the test suite")


if __name__ == "__main__":
    main()
