import numpy as np
from scipy.linalg import expm

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


def dense_x_sum(n):
    """Sum_j X_j as a dense matrix; qubit j acts on bit j of the basis index."""
    total = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for j in range(n):
        op = np.ones((1, 1), dtype=complex)
        for q in reversed(range(n)):
            op = np.kron(op, PAULI_X if q == j else np.eye(2))
        total += op
    return total


def dense_mixer(n, beta, mixer):
    if mixer == "GM":
        sym = np.full(2 ** n, 2.0 ** (-n / 2))
        return expm(-1j * beta * 2 * np.outer(sym, sym))
    return expm(-1j * beta * dense_x_sum(n))


def dense_circuit(energies, betas, gammas, mixer):
    n = int(np.log2(len(energies)))
    psi = np.full(2 ** n, 2.0 ** (-n / 2), dtype=complex)
    for b, g in zip(betas, gammas):
        psi = dense_mixer(n, b, mixer) @ (expm(-1j * g * np.diag(energies)) @ psi)
    return psi


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
