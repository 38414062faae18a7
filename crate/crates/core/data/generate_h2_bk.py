"""Regenerate h2_bk_sto3g.json.

Not part of the build. Requires pyscf and openfermion:

    pip install pyscf openfermion
    python generate_h2_bk.py > h2_bk_sto3g.json

The checksum covers the term list only: sha256 over lines "<pauli> <repr(coeff)>\n"
in file order.
"""
import hashlib
import json

import numpy as np
from openfermion import InteractionOperator, bravyi_kitaev, get_fermion_operator
from pyscf import ao2mo, fci, gto, scf

BOND = 0.735

mol = gto.M(atom=f"H 0 0 0; H 0 0 {BOND}", basis="sto-3g", unit="Angstrom", verbose=0)
mf = scf.RHF(mol)
mf.kernel()
e_hf = mf.e_tot
e_fci = fci.FCI(mf).kernel()[0]

c = mf.mo_coeff
h1 = c.T @ mf.get_hcore() @ c
eri = ao2mo.restore(1, ao2mo.kernel(mol, c), 2)

n_orb = 2
n_spin = 2 * n_orb
one = np.zeros((n_spin, n_spin))
two = np.zeros((n_spin,) * 4)
for p in range(n_orb):
    for q in range(n_orb):
        for s in range(2):
            one[2 * p + s, 2 * q + s] = h1[p, q]
for p in range(n_orb):
    for q in range(n_orb):
        for r in range(n_orb):
            for s in range(n_orb):
                for a in range(2):
                    for b in range(2):
                        two[2 * p + a, 2 * q + b, 2 * r + b, 2 * s + a] = eri[p, s, q, r] / 2

qop = bravyi_kitaev(get_fermion_operator(InteractionOperator(mol.energy_nuc(), one, two)))
qop.compress()

terms = []
for key, val in sorted(qop.terms.items()):
    word = ["I"] * n_spin
    for idx, op in key:
        word[idx] = op
    terms.append(("".join(word), float(np.real(val))))

digest = hashlib.sha256("".join(f"{p} {c!r}\n" for p, c in terms).encode()).hexdigest()
doc = {
    "metadata": {
        "molecule": "H2",
        "geometry": f"H 0 0 0; H 0 0 {BOND} (angstrom)",
        "basis": "sto-3g",
        "mapping": "bravyi-kitaev",
        "qubit_order": "character k of a Pauli string acts on qubit k",
        "includes_nuclear_repulsion": True,
        "reference_energies": {"e_hf": e_hf, "e_fci": e_fci},
        "generator": "pyscf RHF/FCI + openfermion bravyi_kitaev (generate_h2_bk.py)",
        "version": 1,
        "checksum": "sha256:" + digest,
    },
    "terms": [{"pauli": p, "coeff": c} for p, c in terms],
}
print(json.dumps(doc, indent=2))
