"""Plaquette operator map and dense verification of the diagonalization.

A single 2x2 plaquette of the compact fermion-to-qubit mapping lives on five
qubits: the four vertices (clockwise 1..4) and the auxiliary face qubit.
Vertex operators map to single-qubit Z; edge operators map to weight-3
strings on the two endpoints plus the auxiliary.

The concrete letter/sign assignment below is fixed by requiring, all at once:
the derived diagonal operators Y1.Y3.Zaux and X2.X4.Zaux, the hopping pair on
edge (2,3) mapping to (X2.X3.Xaux + Y2.Y3.Xaux)/2, the closed-loop edge
product equal to +identity, and the plaquette time-evolution identity against
the explicit diagonalizing circuit.  Those constraints leave a single
solution; note they force the diagonal operators to carry orientations
1->3 and 4->2 (the reversed orientations are the negatives).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pauli import (
    PauliString,
    PauliSum,
    exp_pauli_rotation,
    expm_hermitian,
    phase_quotient_distance,
    unitarity_defect,
)

N_QUBITS = 5  # vertices 1..4 plus the auxiliary face qubit
AUX = 5


def _string(phase: complex = 1, **letters: str) -> PauliString:
    chars = ["I"] * N_QUBITS
    for key, letter in letters.items():
        chars[int(key[1:]) - 1] = letter
    return PauliString("".join(chars), phase)


def plaquette_operator_map() -> dict[str, PauliString]:
    """Vertex and edge operators of the bulk plaquette.

    Boundary edges are oriented as subscripted; the diagonals E31 and E24
    hold the derived operators (orientations 1->3 and 4->2, see module
    docstring).
    """
    e21 = _string(-1, q2="X", q1="Y", q5="Y")
    e23 = _string(+1, q2="X", q3="Y", q5="X")
    e43 = _string(-1, q4="X", q3="Y", q5="Y")
    e41 = _string(-1, q4="X", q1="Y", q5="X")
    mapping = {
        "V1": _string(q1="Z"),
        "V2": _string(q2="Z"),
        "V3": _string(q3="Z"),
        "V4": _string(q4="Z"),
        "E21": e21,
        "E32": -e23,
        "E43": e43,
        "E14": -e41,
    }
    i = PauliString("I" * N_QUBITS, 1j)
    mapping["E31"] = i * (-e21) * e23          # = i E12 E23, oriented 1->3
    mapping["E24"] = i * e41 * (-e21)          # = i E41 E12, oriented 4->2
    return mapping


#: Vertex support of each mapped operator, for the share-a-vertex rule.
_VERTICES = {
    "V1": {1}, "V2": {2}, "V3": {3}, "V4": {4},
    "E21": {2, 1}, "E32": {3, 2}, "E43": {4, 3}, "E14": {1, 4},
    "E31": {3, 1}, "E24": {2, 4},
}

_BOUNDARY_EDGES = ((2, 1), (2, 3), (4, 3), (4, 1))


def _directed_edges(mapping: dict[str, PauliString]) -> dict[tuple[int, int], PauliString]:
    edges = {
        (2, 1): mapping["E21"],
        (3, 2): mapping["E32"],
        (4, 3): mapping["E43"],
        (1, 4): mapping["E14"],
    }
    for (j, k), e in list(edges.items()):
        edges[(k, j)] = -e
    return edges


def check_majorana_relations(mapping: dict[str, PauliString] | None = None) -> dict[str, bool]:
    """Verify the algebraic relations of the mapped vertex/edge operators.

    Checks Hermiticity, self-inversion and tracelessness, the
    share-a-vertex anticommutation rule over all operator pairs, the
    edge-concatenation identities for the two diagonals, and the closed-loop
    product around the plaquette.
    """
    mapping = mapping or plaquette_operator_map()
    report: dict[str, bool] = {}
    identity = PauliString("I" * N_QUBITS)

    for name, op in mapping.items():
        report[f"{name} hermitian"] = op.is_hermitian()
        report[f"{name} self-inverse"] = (op * op) == identity
        report[f"{name} traceless"] = op.weight > 0

    names = sorted(mapping)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            share = bool(_VERTICES[a] & _VERTICES[b])
            commute = mapping[a].commutes_with(mapping[b])
            label = "anticommute" if share else "commute"
            report[f"{{{a},{b}}}={label}"] = (commute != share)

    edges = _directed_edges(mapping)
    i = PauliString("I" * N_QUBITS, 1j)
    # concatenation E_jl = i E_jk E_kl with the diagonals' stored orientations
    report["E31 concatenation"] = (i * edges[(1, 2)] * edges[(2, 3)]) == mapping["E31"]
    report["E24 concatenation"] = (i * edges[(4, 1)] * edges[(1, 2)]) == mapping["E24"]
    report["diagonal chains agree"] = (
        (i * edges[(4, 3)] * edges[(3, 2)]) == mapping["E24"]
    )
    loop = edges[(1, 2)] * edges[(2, 3)] * edges[(3, 4)] * edges[(4, 1)]
    report["loop product = +I"] = loop == identity
    return report


def build_plaquette_hamiltonian(t_coupling: float) -> PauliSum:
    """Qubit image of the single-plaquette hopping Hamiltonian.

    Each boundary edge contributes -t/(2i) (E_jk V_k + V_j E_jk).
    """
    mapping = plaquette_operator_map()
    edges = _directed_edges(mapping)
    terms = []
    for (j, k) in _BOUNDARY_EDGES:
        e = edges[(j, k)]
        vj = mapping[f"V{j}"]
        vk = mapping[f"V{k}"]
        for s in (e * vk, vj * e):
            # each product is anti-Hermitian (phase +/-i); -t/(2i) * (+/-i P)
            terms.append((-t_coupling / 2j * s.phase, PauliString(s.letters)))
    return PauliSum.from_terms(terms)


def fourier_transform(j: int, k: int) -> np.ndarray:
    """Dense two-mode fermionic Fourier transform between plaquette modes.

    Built as exp(i pi/4 V_j) exp(pi/8 V_j E_kj) exp(pi/8 E_kj V_k); the edge
    enters with orientation k->j, the convention under which this reproduces
    the explicit rotation sequences of the diagonalizing circuit.
    """
    mapping = plaquette_operator_map()
    edges = _directed_edges(mapping)
    edges[(1, 3)] = mapping["E31"]
    edges[(3, 1)] = -mapping["E31"]
    edges[(4, 2)] = mapping["E24"]
    edges[(2, 4)] = -mapping["E24"]
    vj, vk = mapping[f"V{j}"], mapping[f"V{k}"]
    ekj = edges[(k, j)]
    out = exp_pauli_rotation(-math.pi / 4, vj)
    for product in (vj * ekj, ekj * vk):
        # V.E products are anti-Hermitian with phase +/-i: pi/8 * (s*i) * P
        sign = (product.phase / 1j).real
        out = out @ exp_pauli_rotation(-sign * math.pi / 8, PauliString(product.letters))
    return out


def diagonalizing_clifford_dagger() -> np.ndarray:
    """C† = exp(i pi/4 Y2 X3 Xaux) X2, isolating the two inner rotations."""
    return exp_pauli_rotation(-math.pi / 4, _string(q2="Y", q3="X", q5="X")) \
        @ _string(q2="X").dense()


@dataclass(frozen=True)
class DiagonalizationCircuit:
    """The dense halves of F31 F24 C . C† F24† F31†."""

    forward: np.ndarray  # F31 F24 C
    inverse: np.ndarray  # C† F24† F31†

    def evolution(self, theta: float) -> np.ndarray:
        rot = exp_pauli_rotation(-theta, _string(q2="Z")) \
            @ exp_pauli_rotation(-theta, _string(q3="Z"))
        return self.forward @ rot @ self.inverse


def build_diagonalization_circuit(theta: float = 0.0) -> np.ndarray:
    """Dense circuit F31 F24 C e^{i theta Z2} e^{i theta Z3} C† F24† F31†."""
    return _circuit().evolution(theta)


def _circuit() -> DiagonalizationCircuit:
    cd = diagonalizing_clifford_dagger()
    f31 = fourier_transform(3, 1)
    f24 = fourier_transform(2, 4)
    inverse = cd @ f24.conj().T @ f31.conj().T
    forward = f31 @ f24 @ cd.conj().T
    return DiagonalizationCircuit(forward, inverse)


def check_clifford_relations(atol: float = 1e-12) -> dict[str, float]:
    """Dense checks that C maps Z2, Z3 onto the plaquette hopping axes."""
    cd = diagonalizing_clifford_dagger()
    c = cd.conj().T
    z2 = _string(q2="Z").dense()
    z3 = _string(q3="Z").dense()
    return {
        "C Z2 C† = X2X3Xaux": float(np.linalg.norm(c @ z2 @ cd - _string(q2="X", q3="X", q5="X").dense())),
        "C Z3 C† = Y2Y3Xaux": float(np.linalg.norm(c @ z3 @ cd - _string(q2="Y", q3="Y", q5="X").dense())),
        "circuit unitarity": unitarity_defect(build_diagonalization_circuit(0.37)),
    }


def verify_plaquette_evolution(t_coupling: float, theta: float) -> float:
    """Deviation between exp(-i theta/t H_plaquette) and the circuit.

    ``theta`` is the inner rotation angle t*T_sim/(2r); global phases are
    quotiented out of the comparison.
    """
    h = build_plaquette_hamiltonian(t_coupling).dense()
    lhs = expm_hermitian((theta / t_coupling) * h) if t_coupling != 0 else np.eye(2**N_QUBITS)
    rhs = build_diagonalization_circuit(theta if t_coupling != 0 else 0.0)
    return phase_quotient_distance(lhs, rhs)


def verify_fourier_identity(theta: float) -> float:
    """Deviation of F23-conjugated number rotations from the hopping rotation.

    Checks F23 e^{i theta n2} e^{-i theta n3} F23† against
    e^{i theta (X2X3Xaux + Y2Y3Xaux)/2}.
    """
    f23 = fourier_transform(2, 3)
    eye = np.eye(2**N_QUBITS)
    n2 = (eye - _string(q2="Z").dense()) / 2
    n3 = (eye - _string(q3="Z").dense()) / 2
    lhs = f23 @ expm_hermitian(-theta * n2) @ expm_hermitian(theta * n3) @ f23.conj().T
    axis = (_string(q2="X", q3="X", q5="X").dense() + _string(q2="Y", q3="Y", q5="X").dense()) / 2
    rhs = expm_hermitian(-theta * axis)
    return float(np.linalg.norm(lhs - rhs))


def run_verification(n_angles: int = 20, seed: int = 0, tolerance: float = 1e-10) -> dict:
    """Full plaquette verification: relations, Clifford identities, evolution.

    Returns a report dict; ``report["passed"]`` aggregates everything.
    """
    relations = check_majorana_relations()
    clifford = check_clifford_relations()
    rng = np.random.default_rng(seed)
    angles = rng.uniform(0.0, math.pi, n_angles)
    evolution = {float(a): verify_plaquette_evolution(1.0, float(a)) for a in angles}
    fourier = {float(a): verify_fourier_identity(float(a)) for a in angles[: max(3, n_angles // 4)]}
    passed = (
        all(relations.values())
        and all(v <= 1e-12 for v in clifford.values())
        and all(v <= tolerance for v in evolution.values())
        and all(v <= tolerance for v in fourier.values())
    )
    return {
        "relations": relations,
        "clifford": clifford,
        "evolution": evolution,
        "fourier": fourier,
        "passed": passed,
    }


def mutated_map(target: str = "E21", qubit: int = 0) -> dict[str, PauliString]:
    """The operator map with one letter corrupted, for negative tests."""
    mapping = plaquette_operator_map()
    original = mapping[target]
    letters = list(original.letters)
    letters[qubit] = {"I": "X", "X": "Y", "Y": "Z", "Z": "I"}[letters[qubit]]
    mapping[target] = PauliString("".join(letters), original.phase)
    return mapping
