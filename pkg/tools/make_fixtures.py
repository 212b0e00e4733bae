"""Regenerate the bundled STO-3G spin-orbital integral fixtures with PySCF.

Spin orbitals are interleaved (2i alpha, 2i+1 beta) and the two-body table
follows ``1/2 sum h_pqrs a+_p a+_q a_r a_s`` with ``h_pqrs = (ps|qr)``.

    python tools/make_fixtures.py [output_dir]
"""

import math
import sys
from pathlib import Path

import numpy as np
from pyscf import ao2mo, gto, scf

from unipart.majorana import IntegralTable, serialize_integrals

ANGLE = math.radians(104.45)

MOLECULES = {
    "h2": "H 0 0 0; H 0 0 0.7414",
    "lih": "Li 0 0 0; H 0 0 1.5949",
    "hf": "H 0 0 0; F 0 0 0.9168",
    "beh2": "Be 0 0 0; H 0 0 1.3264; H 0 0 -1.3264",
    "h2o": f"O 0 0 0; H 0.9584 0 0; H {0.9584 * math.cos(ANGLE):.10f} {0.9584 * math.sin(ANGLE):.10f} 0",
}


def spin_orbital_tables(mol_spec: str):
    mol = gto.M(atom=mol_spec, basis="sto-3g", unit="Angstrom", verbose=0)
    mf = scf.RHF(mol).run()
    c = mf.mo_coeff
    n = c.shape[1]
    h_mo = c.T @ mf.get_hcore() @ c
    eri = ao2mo.restore(1, ao2mo.kernel(mol, c), n)  # chemist (ij|kl)
    ns = 2 * n
    h1 = np.zeros((ns, ns))
    h2 = np.zeros((ns, ns, ns, ns))
    for p in range(ns):
        for q in range(ns):
            if p % 2 == q % 2:
                h1[p, q] = h_mo[p // 2, q // 2]
    for p in range(ns):
        for q in range(ns):
            for r in range(ns):
                for s in range(ns):
                    if p % 2 == s % 2 and q % 2 == r % 2:
                        h2[p, q, r, s] = eri[p // 2, s // 2, q // 2, r // 2]
    electronic = mf.e_tot - mol.energy_nuc()
    return h1, h2, mol.nelectron, electronic, mol.energy_nuc()


def main(out_dir: str) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, spec in MOLECULES.items():
        h1, h2, n_elec, e_elec, e_nuc = spin_orbital_tables(spec)
        # round so that symmetric images agree to the last digit
        table = IntegralTable.from_arrays(np.round(h1, 12), np.round(h2, 12), tol=1e-10)
        header = (
            f"# {name} STO-3G at {spec}\n"
            f"# electrons {n_elec}\n"
            f"# hf_electronic_energy {e_elec:.12f}\n"
            f"# nuclear_repulsion {e_nuc:.12f}\n"
        )
        (out / f"{name}_sto3g.txt").write_text(header + serialize_integrals(table))
        print(name, table.n_orbitals, "spin orbitals", f"E_elec={e_elec:.8f}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else str(Path(__file__).resolve().parents[1] / "src/unipart/data"))
