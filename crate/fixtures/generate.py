"""Regenerate the bundled FCIDUMP fixtures.

Requires pyscf. Canonical RHF orbitals in STO-3G, ordered by increasing
orbital energy. Writes one FCIDUMP per geometry plus PROVENANCE.toml with
the reference HF and FCI energies computed by pyscf.
"""

import os

import numpy as np
from pyscf import ao2mo, fci, gto, mcscf, scf
from pyscf.tools import fcidump

HERE = os.path.dirname(os.path.abspath(__file__))


def h_chain(n, d):
    return [("H", (0.0, 0.0, i * d)) for i in range(n)]


def beh2(d):
    return [("H", (0.0, 0.0, -d)), ("Be", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, d))]


def n2(d):
    return [("N", (0.0, 0.0, 0.0)), ("N", (0.0, 0.0, d))]


def full_space(name, atoms):
    mol = gto.M(atom=atoms, basis="sto-3g", unit="Angstrom", symmetry=False, verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    assert mf.converged, name
    path = os.path.join(HERE, name + ".FCIDUMP")
    fcidump.from_scf(mf, path, tol=1e-14)
    e_fci = fci.FCI(mf).kernel()[0]
    return dict(n_orb=mol.nao, n_elec=mol.nelectron, e_hf=mf.e_tot, e_fci=e_fci)


def active_space(name, atoms, ncas, nelecas):
    mol = gto.M(atom=atoms, basis="sto-3g", unit="Angstrom", symmetry=False, verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    assert mf.converged, name
    cas = mcscf.CASCI(mf, ncas, nelecas)
    h1, ecore = cas.get_h1eff()
    eri = ao2mo.restore(8, cas.get_h2eff(), ncas)
    path = os.path.join(HERE, name + ".FCIDUMP")
    fcidump.from_integrals(path, h1, eri, ncas, nelecas, nuc=ecore, ms=0, tol=1e-14)
    e_cas = cas.kernel()[0]
    # HF energy expressed in the active space equals the full RHF energy.
    return dict(n_orb=ncas, n_elec=nelecas, e_hf=mf.e_tot, e_fci=e_cas)


JOBS = [
    ("h2_0.735", lambda: full_space("h2_0.735", h_chain(2, 0.735)), "H2, d=0.735 A"),
    ("h4_1.5", lambda: full_space("h4_1.5", h_chain(4, 1.5)), "linear H4 chain, d=1.5 A"),
]
for d in (1.0, 2.0, 2.5):
    JOBS.append((f"h6_{d}", (lambda d=d: full_space(f"h6_{d}", h_chain(6, d))), f"linear H6 chain, d={d} A"))
for d in (1.3, 2.0, 2.5):
    JOBS.append((f"beh2_{d}", (lambda d=d: full_space(f"beh2_{d}", beh2(d))), f"linear H-Be-H, Be-H d={d} A"))
for d in (1.1, 1.5, 2.0):
    JOBS.append((f"n2_{d}", (lambda d=d: active_space(f"n2_{d}", n2(d), 6, 6)), f"N2, d={d} A, CAS(6e,6o)"))


def main():
    lines = ["# Generated by fixtures/generate.py (pyscf, STO-3G, canonical RHF orbitals).", ""]
    for name, job, label in JOBS:
        info = job()
        lines += [
            f"[\"{name}\"]",
            f"label = \"{label}\"",
            f"n_spatial = {info['n_orb']}",
            f"n_electrons = {info['n_elec']}",
            f"e_hf = {info['e_hf']:.12f}",
            f"e_fci = {info['e_fci']:.12f}",
            "",
        ]
        print(name, info)
    with open(os.path.join(HERE, "PROVENANCE.toml"), "w") as fh:
        fh.write("\n".join(lines))


if __name__ == "__main__":
    main()
