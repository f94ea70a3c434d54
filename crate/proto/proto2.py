"""Prototype C8 (layer L1), C9 (Lp scan), C10 (sheet gap), C11 (flux)."""
import numpy as np
from scipy import special

KMAX = 40000
jz = special.jn_zeros(1, KMAX)
J0z = special.j0(jz)
sgn = np.sign(J0z)
a_rigid = -sgn * 2.0*np.sqrt(np.pi)/jz
a_zm    = -sgn * 32.0*np.sqrt(np.pi)/jz**3
T = 1.0

def gauss_panels(a, b, n_panels, order, grade=None):
    xg, wg = np.polynomial.legendre.leggauss(order)
    if grade == 'left':
        fr = np.geomspace(1e-6, 1.0, n_panels+1)
        bp = a + (b-a)*fr; bp[0] = a
    elif grade == 'right':
        fr = np.geomspace(1e-6, 1.0, n_panels+1)[::-1]
        bp = b - (b-a)*fr; bp[-1] = b
    else:
        bp = np.linspace(a, b, n_panels+1)
    xs, ws = [], []
    for lo, hi in zip(bp[:-1], bp[1:]):
        xs.append(0.5*(hi-lo)*xg + 0.5*(hi+lo)); ws.append(0.5*(hi-lo)*wg)
    return np.concatenate(xs), np.concatenate(ws)

def omega_nodes(a, K, r):
    jk = jz[:K]
    C = (a[:K]*jk)/(np.sqrt(np.pi)*np.abs(J0z[:K]))
    return C[:, None]*special.j0(np.outer(jk, r))

# ---------- C8: layer L1 mass ----------
def layer_l1(a, nu, delta, Tend, K):
    # radial nodes: graded toward r=1 to resolve sheet
    r, wr = gauss_panels(1-delta, 1.0, 24, 16, grade='right')
    W = omega_nodes(a, K, r)
    s, ws = gauss_panels(0, np.sqrt(Tend), 30, 16, grade='left')
    jk2 = jz[:K]**2
    tot = 0.0
    for si, wi in zip(s, ws):
        t = si*si
        om = np.exp(-nu*jk2*t) @ W
        l1 = 2*np.pi*np.sum(np.abs(om)*r*wr)
        tot += wi*2*si*l1*l1
    return np.sqrt(tot)

print("C8 layer L1 * (nu/delta)^(1/2):")
ratios = {}
for delta in [1e-3, 1e-2]:
    for nu in [1e-5, 1e-4, 1e-3]:
        K = int(min(KMAX, max(4000, 100/(np.pi*delta))))
        v = layer_l1(a_rigid, nu, delta, T, K)
        q = v*np.sqrt(nu/delta)
        ratios[(delta, nu)] = q
        print(f"  delta={delta:6.0e} nu={nu:6.0e} K={K:6d} L1t={v:10.4e} scaled={q:10.4e}")
med = np.median(list(ratios.values()))
print("  median:", f"{med:.4e}", " max/med:", max(ratios.values())/med,
      " min/med:", min(ratios.values())/med)
print("  factor-2 window ok:", max(ratios.values()) <= 2*med and min(ratios.values()) >= med/2)

print("delta=nu decay:")
dn = []
for nu in [1e-3, 1e-4, 1e-5]:
    K = int(min(KMAX, max(4000, 10/(np.pi*nu))))
    v = layer_l1(a_rigid, nu, nu, T, K)
    dn.append(v)
    print(f"  nu=delta={nu:6.0e} K={K:6d} val={v:.4e}")
print("  final/initial:", dn[-1]/dn[0], " (<0.1 needed)")

# ---------- C9: Lp norm scan at t=T/2 ----------
def lp_norms(a, nu, t, K, ps=(1, 2)):
    r, wr = gauss_panels(0, 1.0, 60, 16)
    W = omega_nodes(a, K, r)
    om = np.exp(-nu*jz[:K]**2*t) @ W
    out = {}
    for p in ps:
        out[p] = (2*np.pi*np.sum(np.abs(om)**p*r*wr))**(1.0/p)
    out['inf'] = np.max(np.abs(om))
    return out

print("\nC9 Lp norms at t=0.5, omega0=2:")
n2 = {}
for nu in [1e-2, 1e-3, 1e-4, 1e-5]:
    K = 8000
    n = lp_norms(a_rigid, nu, 0.5, K)
    n2[nu] = n
    print(f"  nu={nu:6.0e}  L1={n[1]:8.4f}  L2={n[2]:9.4f}  Linf={n['inf']:10.3f}")
print("  L2 growth 1e-5 vs 1e-2:", n2[1e-5][2]/n2[1e-2][2], "(need >= 3)")
l1s = [n2[nu][1] for nu in [1e-2, 1e-3, 1e-4, 1e-5]]
print("  L1 variation:", (max(l1s)-min(l1s))/min(l1s), "(need < 0.2)")

print("C9 zero-mass profile L2:")
l2zm = []
for nu in [1e-2, 1e-3, 1e-4, 1e-5]:
    n = lp_norms(a_zm, nu, 0.5, 8000)
    l2zm.append(n[2])
    print(f"  nu={nu:6.0e}  L2={n[2]:9.4f}")
print("  variation:", (max(l2zm)-min(l2zm))/min(l2zm), "(need < 0.2)")

# ---------- C10: sheet gap f=r^2 ----------
# lhs = sum a_k e^{-nu j^2 t} (omega_k, r^2);  (omega_k, r^2) = 4 sqrt(pi) sgn_k / j_k
# rhs = (omega0, r^2) - m*f(1) = pi - 2pi = -pi  for omega0=2
print("\nC10 sheet gap (f=r^2, t=0.5):")
gaps = []
for nu in [1e-2, 1e-3, 1e-4, 1e-5]:
    lhs = np.sum(a_rigid*np.exp(-nu*jz**2*0.5)*4*np.sqrt(np.pi)*sgn/jz)
    gap = abs(lhs - (-np.pi))
    gaps.append(gap)
    print(f"  nu={nu:6.0e} lhs={lhs:10.6f} gap={gap:.6f}")
print("  decreasing:", all(np.diff(gaps) < 0), " final/initial:", gaps[-1]/gaps[0], "(<0.1)")

# also f == 1 identity: lhs=0 (each mode integrates to 0), rhs = m - m*1 = 0
# ---------- C11: boundary flux sqrt(nu) scaling ----------
print("\nC11 disk boundary flux (phi=1):")
fl = {}
for nu in [1e-2, 1e-3, 1e-4, 1e-5, 1e-6]:
    v = -4*np.pi*np.sum((1-np.exp(-nu*jz**2*T))/jz**2)
    fl[nu] = v
    print(f"  nu={nu:6.0e} flux={v:12.6e}  flux/sqrt(nu)={v/np.sqrt(nu):10.4f}")
rs = [fl[nu]/fl[10*nu] for nu in [1e-3, 1e-4, 1e-5, 1e-6]]
print("  decade ratios vs 1/sqrt(10)=0.3162:", [f"{r:.4f}" for r in rs])
exps = [np.log(fl[nu]/fl[10*nu])/np.log(0.1) for nu in [1e-3, 1e-4, 1e-5, 1e-6]]
print("  local exponents:", [f"{e:.4f}" for e in exps])
al = np.polyfit(np.log([1e-2,1e-3,1e-4,1e-5,1e-6]), np.log(np.abs(list(fl.values()))), 1)[0]
print("  fitted exponent:", f"{al:.4f}", "(window 0.5 +- 10%?)")

print("shear flux (phi0=1, phi=1): value = -(4/sqrt(pi)) L sqrt(nu T), exponent exactly 0.5")

# ---------- C6: mass identities ----------
print("\nC6 (omega(t),1) for NS at 20 t's (quadrature):")
K = 2000
r, wr = gauss_panels(0, 1.0, max(60, int(10*jz[K-1]/(2*np.pi)/16)), 16)
W = omega_nodes(a_rigid, K, r)
worst = 0.0
for t in np.geomspace(1e-3, 1.0, 20):
    om = np.exp(-jz[:K]**2*1e-3*t) @ W   # nu=1e-3
    mass = 2*np.pi*np.sum(om*r*wr)
    worst = max(worst, abs(mass))
print("  worst |(omega,1)|:", f"{worst:.2e}", "(need <= 1e-8)  nodes:", len(r))
