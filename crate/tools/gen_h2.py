"""Generate STO-3G H2 qubit Hamiltonians (Jordan-Wigner, 4 qubits).

Spin-orbital order is (0a, 0b, 1a, 1b); qubit 0 is written first in every
Pauli string, so the Hartree-Fock reference is |1100>.

    python3 tools/gen_h2.py data/h2
"""
import sys
from pathlib import Path

import numpy as np
from openfermion import InteractionOperator, get_fermion_operator, jordan_wigner
from openfermion.chem.molecular_data import spinorb_from_spatial
from pyscf import ao2mo, gto, scf

BOND_LENGTHS = [0.5, 0.6, 0.7, 0.7414, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5,
                1.6, 1.7, 1.8, 1.9, 2.0, 2.1]


def qubit_hamiltonian(bond):
    mol = gto.M(atom=f"H 0 0 0; H 0 0 {bond}", basis="sto-3g", unit="Angstrom")
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    c = mf.mo_coeff
    h1 = c.T @ mf.get_hcore() @ c
    n = c.shape[1]
    eri = ao2mo.restore(1, ao2mo.kernel(mol, c), n)
    # chemist (pq|rs) -> openfermion physicist ordering <pq|sr>
    h2 = np.asarray(eri.transpose(0, 2, 3, 1), order="C")
    one, two = spinorb_from_spatial(h1, h2)
    op = InteractionOperator(mol.energy_nuc(), one, 0.5 * two)
    return jordan_wigner(get_fermion_operator(op)), mf.e_tot


def pauli_string(term, n=4):
    s = ["I"] * n
    for q, p in term:
        s[q] = p
    return "".join(s)


def main(out):
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    for bond in BOND_LENGTHS:
        qh, e_hf = qubit_hamiltonian(bond)
        lines = [
            f"# H2 STO-3G, bond length {bond} A, Jordan-Wigner, 4 qubits",
            "# generated by tools/gen_h2.py (pyscf RHF integrals, openfermion JW)",
            f"# RHF energy {e_hf:.12f} Ha; HF reference |1100>",
        ]
        for term, coeff in sorted(qh.terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
            if abs(coeff) < 1e-12:
                continue
            assert abs(coeff.imag) < 1e-12
            lines.append(f"{coeff.real:+.15f} {pauli_string(term)}")
        (out / f"h2_{bond:.4f}.txt").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/h2")
