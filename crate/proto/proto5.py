"""Bessel 3-branch accuracy + C9 L2 at T=0.1 + frozen refs."""
import math
import numpy as np
from scipy import special
import mpmath as mp

mp.mp.dps = 40

# ---- C9 L2 clauses at T=0.1 ----
KMAX = 20000
jz = special.jn_zeros(1, KMAX)
J0z = special.j0(jz)
sgn = np.sign(J0z)
a_rigid = -sgn * 2.0*np.sqrt(np.pi)/jz
a_zm = -sgn * 32.0*np.sqrt(np.pi)/jz**3

def l2_omega(a, K, nu, t):
    # Parseval: ||omega(t)||_L2^2 = sum a_k^2 j_k^2 e^{-2 nu j_k^2 t}
    w = a[:K]**2 * jz[:K]**2 * np.exp(-2.0*nu*jz[:K]**2*t)
    return math.sqrt(np.sum(w))

print("C9 L2 at t=0.05 (T=0.1):")
l2r, l2z = [], []
for nu in [1e-2, 1e-3, 1e-4, 1e-5]:
    l2r.append(l2_omega(a_rigid, 20000, nu, 0.05))
    l2z.append(l2_omega(a_zm, 20000, nu, 0.05))
print("  rigid L2:", ["%.4f" % v for v in l2r], " ratio(1e-5/1e-2) =", l2r[3]/l2r[0])
print("  strictly increasing as nu dec:", all(b > a for a, b in zip(l2r, l2r[1:])))
print("  zero-mass L2:", ["%.4f" % v for v in l2z], " var =", (max(l2z)-min(l2z))/min(l2z))

# ---- Bessel three-branch ----
def series_jn(n, x):
    xh = 0.5*x
    term = 1.0
    for i in range(1, n+1):
        term *= xh/i
    s = term
    m = 0
    while m < 200:
        m += 1
        term = -term*xh*xh/(m*(m+n))
        s_new = s + term
        if s_new == s and m > 3:
            break
        s = s_new
    return s

def miller_jn(x):
    N = int(x + 16.0*x**(1.0/3.0) + 28)
    if N % 2:
        N += 1
    jp, j = 0.0, 1e-300
    out = [0.0, 0.0, 0.0]
    ssum = 0.0
    for m in range(N, 0, -1):
        jm = (2.0*m/x)*j - jp
        jp, j = j, jm
        if abs(j) > 1e250:
            j *= 1e-250
            jp *= 1e-250
            ssum *= 1e-250
            out = [o*1e-250 for o in out]
        idx = m - 1
        if idx <= 2:
            out[idx] = j
        if idx >= 2 and idx % 2 == 0:
            ssum += 2.0*j
    norm = out[0] + ssum
    return [o/norm for o in out]

def hankel_jn(n, x):
    mu = 4.0*n*n
    a = [1.0]
    for k in range(1, 30):
        a.append(a[-1]*(mu - (2*k-1)**2)/(k*8.0))
    P, Q = 0.0, 0.0
    sp = 1.0
    prev = math.inf
    for k in range(0, 14):
        tP = sp*a[2*k]/x**(2*k)
        if abs(tP) > prev:
            break
        P += tP
        prev = abs(tP)
        Q += sp*a[2*k+1]/x**(2*k+1)
        sp = -sp
    chi = x - (0.5*n + 0.25)*math.pi
    return math.sqrt(2.0/(math.pi*x))*(P*math.cos(chi) - Q*math.sin(chi))

def my_jn(n, x, s1=7.0, s2=19.0):
    if x < s1:
        return series_jn(n, x)
    if x < s2:
        return miller_jn(x)[n]
    return hankel_jn(n, x)

print("\nBessel 3-branch abs err vs mpmath (switch 7/19):")
xs = np.concatenate([np.linspace(1e-6, 7, 90), np.linspace(7, 19, 90),
                     np.linspace(19, 120, 90), np.linspace(120, 1200, 60),
                     np.array([5000.0, 12000.0, 31416.0, 125000.0])])
for n in [0, 1, 2]:
    worst = (0.0, 0.0)
    for x in xs:
        ref = float(mp.besselj(n, mp.mpf(float(x))))
        err = abs(my_jn(n, float(x)) - ref)
        if err > worst[0]:
            worst = (err, float(x))
    print(f"  J{n}: worst {worst[0]:.2e} at x={worst[1]:.2f}")

# branch-edge scrutiny
for edge in [7.0, 19.0]:
    for n in [0, 1]:
        lo = abs(my_jn(n, edge-1e-9) - float(mp.besselj(n, mp.mpf(edge-1e-9))))
        hi = abs(my_jn(n, edge+1e-9) - float(mp.besselj(n, mp.mpf(edge+1e-9))))
        print(f"  edge {edge} J{n}: below {lo:.2e} above {hi:.2e}")

print("\nFrozen references (mpmath):")
for n, x in [(0, 0.5), (0, 3.0), (0, 11.5), (0, 25.0), (0, 316.0), (1, 1.0), (1, 7.5),
             (1, 14.0), (1, 100.0), (2, 2.5), (2, 18.0), (2, 500.0), (0, 1000.0), (1, 1000.0)]:
    print(f"  J{n}({x}) = {mp.nstr(mp.besselj(n, mp.mpf(x)), 17)}")
for x in [0.3, 1.0, 2.0, 3.5, 5.0]:
    print(f"  erf({x}) = {mp.nstr(mp.erf(mp.mpf(x)), 17)}")
for k in [1, 2, 3, 5, 10, 100, 1000]:
    print(f"  j1_{k} = {mp.nstr(mp.besseljzero(1, k), 17)}")
print(f"  (2-sqrt2)/sqrt(pi) = {mp.nstr((2-mp.sqrt(2))/mp.sqrt(mp.pi), 17)}")
print(f"  J0(j1_1) = {mp.nstr(mp.besselj(0, mp.besseljzero(1, 1)), 17)}")
print(f"  J0(j1_2) = {mp.nstr(mp.besselj(0, mp.besseljzero(1, 2)), 17)}")
print(f"  J0(j1_3) = {mp.nstr(mp.besselj(0, mp.besseljzero(1, 3)), 17)}")
