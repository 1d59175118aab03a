#!/usr/bin/env python3
"""Competition-style front end for PySAT backends.

Usage: pysat_solve.py <cnf> [<proof>]

Prints s/v lines and exits 10 (SAT) or 20 (UNSAT), which is what
`gallai solve --engine external` expects. The backend defaults to CaDiCaL;
set GALLAI_PYSAT_BACKEND to pick another. When a proof path is given the
backend switches to one that can log DRUP clauses (glucose4 unless the
chosen backend already supports proofs).
"""

import os
import sys

from pysat.formula import CNF
from pysat.solvers import Solver

PROOF_CAPABLE = {"glucose3", "glucose4", "glucose42", "lingeling", "maplechrono", "maplecm", "maplesat"}


def main() -> int:
    if len(sys.argv) not in (2, 3):
        print("usage: pysat_solve.py <cnf> [<proof>]", file=sys.stderr)
        return 1
    cnf = CNF(from_file=sys.argv[1])
    proof_path = sys.argv[2] if len(sys.argv) == 3 else None
    backend = os.environ.get("GALLAI_PYSAT_BACKEND", "cadical195")
    if proof_path and backend not in PROOF_CAPABLE:
        backend = "glucose4"

    with Solver(name=backend, bootstrap_with=cnf.clauses, with_proof=bool(proof_path)) as solver:
        sat = solver.solve()
        print(f"c backend {backend}")
        if sat:
            model = solver.get_model() or []
            values = {abs(lit): lit for lit in model}
            lits = [values.get(v, -v) for v in range(1, cnf.nv + 1)]
            print("s SATISFIABLE")
            for i in range(0, len(lits), 20):
                print("v " + " ".join(map(str, lits[i:i + 20])))
            print("v 0")
            return 10
        print("s UNSATISFIABLE")
        if proof_path:
            with open(proof_path, "w") as out:
                for line in solver.get_proof() or []:
                    out.write(line + "\n")
        return 20


if __name__ == "__main__":
    sys.exit(main())
