# Copyright 2026 The spu Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent numpy/scipy oracle for the constants frozen in the C++ tests.

Builds the ring with Kronecker products (site 1 is the least significant
bit), so it shares no code with the library. Run: python3 frozen_values.py
"""

import math

import numpy as np
from scipy.special import iv

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
I2 = np.eye(2, dtype=complex)
KB = 8.617333262e-5


def site_op(n, ops):
    # ops: {site (1-based): matrix}; site 1 is bit 0, the rightmost factor.
    m = np.eye(1, dtype=complex)
    for s in range(n, 0, -1):
        m = np.kron(m, ops.get(s, I2))
    return m


def tfi(n, theta):
    j = math.cos(theta / 2) ** 2 / n
    h = math.sin(theta / 2) ** 2 / n
    H = np.zeros((2**n, 2**n), dtype=complex)
    for s in range(1, n + 1):
        H += j * site_op(n, {s: X, s % n + 1: X})
    for s in range(1, n + 1):
        H += h * site_op(n, {s: Y})
    return H


def canonical(H, O, beta):
    w, v = np.linalg.eigh(H)
    p = np.exp(-beta * (w - w.min()))
    return float(np.real(sum(p[k] * (v[:, k].conj() @ O @ v[:, k]) for k in range(len(w))) / p.sum()))


def order(beta, nu):
    a = math.log(4 / nu) + beta / 2
    b = max(math.e**2 * beta / 2, math.log(2 / nu) + beta / 2)
    return math.ceil(math.sqrt(2 * a * b))


def truncated(H, beta, nu):
    d = order(beta, nu)
    c = [iv(0, beta / 2)] + [2 * iv(n, beta / 2) for n in range(1, d + 1)]
    w, v = np.linalg.eigh(H)
    x = -w
    vals = np.polynomial.chebyshev.chebval(x, c)
    return v @ np.diag(vals) @ v.conj().T, d, c


def main():
    print("bessel I_3(2.5) =", repr(float(iv(3, 2.5))))
    print("bessel I_0(19.34) =", repr(iv(0, 19.34)))
    print("bessel I_40(19.34) =", repr(iv(40, 19.34)))
    for b, nu in [(38.68222, 0.1), (3.868, 0.002), (0.0, 0.1), (2.0, 0.002), (1.0, 0.1), (4.0, 0.1)]:
        print("order", b, nu, order(b, nu))

    H4 = tfi(4, math.pi / 3)
    for beta in [0.5, 2.0, 5.0]:
        print("N4 pi/3 energy beta", beta, repr(canonical(H4, H4, beta)))
    w = np.linalg.eigvalsh(H4)
    print("N4 pi/3 ground", repr(w.min()), "emax", repr(max(abs(w))))

    H6 = tfi(6, math.pi / 8)
    for T in [300, 400, 600, 1000, 2000]:
        beta = 0.1 / (KB * T)
        print("N6 pi/8 T", T, "beta", repr(beta), "energy", repr(canonical(H6, H6, beta)))

    H3 = tfi(3, math.pi / 8)
    F, d, c = truncated(H3, 2.0, 0.002)
    ex = np.real(np.trace(F @ H3 @ F) / np.trace(F @ F))
    print("N3 pi/8 beta2 truncated ratio", repr(float(ex)), "d", d, "exact", repr(canonical(H3, H3, 2.0)))

    Hp = tfi(5, math.pi)
    print("theta=pi emax", repr(max(abs(np.linalg.eigvalsh(Hp)))))


if __name__ == "__main__":
    main()
