"""Prototype disk/shear diagnostics to validate acceptance windows before Rust."""
import numpy as np
from scipy import special
import mpmath as mp

mp.mp.dps = 30

KMAX = 40000
jz = special.jn_zeros(1, KMAX)
J0z = special.j0(jz)
sgn = np.sign(J0z)

print("j11      =", mp.nstr(mp.besseljzero(1, 1), 17))
print("J0(j11)  =", mp.nstr(mp.besselj(0, mp.besseljzero(1, 1)), 17))
print("sum j^-2 @1e4 =", f"{np.sum(jz[:10000]**-2.0):.10f}", " (window [0.1235,0.1265])")
ks = np.arange(1, 201)
print("bounds k<=200:", np.all(1 + ks < jz[:200]), np.all(jz[:200] <= np.pi*(0.5 + ks)))

a_rigid = -sgn * 2.0*np.sqrt(np.pi)/jz            # omega0 = 2
a_zm    = -sgn * 32.0*np.sqrt(np.pi)/jz**3        # omega0 = 4(1-2r^2), m=0
print("parseval rigid @1e4:", f"{np.sum(a_rigid[:10000]**2):.8f}", " target", f"{np.pi/2:.8f}")

# ---------- C3/C5: rates ----------
T = 1.0
def sup_err_disk(a, nu):
    tg = np.geomspace(T*1e-6, T, 64)
    e = np.exp(-nu*np.outer(tg, jz**2))
    v = np.sqrt(np.sum(a**2*(1-e)**2, axis=1))
    return v.max()

def fit(nus, errs):
    A = np.vstack([np.log(nus), np.ones(len(nus))]).T
    sol, *_ = np.linalg.lstsq(A, np.log(errs), rcond=None)
    resid = np.sqrt(np.mean((A@sol - np.log(errs))**2))/np.log(10)
    return sol[0], np.exp(sol[1]), resid

for name, nus in [("decade", np.geomspace(1e-2, 1e-6, 5)),
                  ("5perdec", np.geomspace(1e-2, 1e-6, 21))]:
    errs = [sup_err_disk(a_rigid, nu) for nu in nus]
    al, C, r = fit(nus, errs)
    print(f"C5 disk alpha ({name}) = {al:.4f}  C={C:.4f} resid_log10={r:.4f}")
errs = [sup_err_disk(a_zm, nu) for nu in np.geomspace(1e-2, 1e-6, 5)]
al, C, r = fit(np.geomspace(1e-2, 1e-6, 5), errs)
print(f"   zero-mass profile alpha = {al:.4f} resid={r:.4f}")
# m != 0 poly profile omega0 = 1 + r^2 -> g=(1/r)(r^2/2 + r^4/4)= r/2 + r^3/4
# a_k = 2 sqrt(pi)/|J0| * int (r/2 + r^3/4) J1 r dr
x2 = lambda j: -J0z/jz          # int_0^1 r^2 J1(jr) dr = J2(j)/j = -J0(j)/j
x4 = lambda j: -J0z*(1-8/jz**2)/jz
a_poly = 2*np.sqrt(np.pi)/np.abs(J0z) * (0.5*x2(jz) + 0.25*x4(jz))
errs = [sup_err_disk(a_poly, nu) for nu in np.geomspace(1e-2, 1e-6, 5)]
al, C, r = fit(np.geomspace(1e-2, 1e-6, 5), errs)
print(f"   omega0=1+r^2 alpha = {al:.4f} resid={r:.4f}")

# ---------- disk omega evaluation machinery (mode matrix) ----------
def omega_nodes(a, K, r):
    """matrix W[k,i] = a_k * j_k * J0(j_k r_i) / (sqrt(pi) |J0(j_k)|)"""
    jk = jz[:K]
    C = (a[:K]*jk)/(np.sqrt(np.pi)*np.abs(J0z[:K]))
    return C[:, None]*special.j0(np.outer(jk, r))

def gauss_panels(a, b, n_panels, order, grade=None):
    """composite Gauss: geometric grading toward a if grade='left' else uniform"""
    xg, wg = np.polynomial.legendre.leggauss(order)
    if grade == 'left':
        # geometric breakpoints toward a
        fr = np.geomspace(1e-6, 1.0, n_panels+1)
        bp = a + (b-a)*fr; bp[0] = a
    else:
        bp = np.linspace(a, b, n_panels+1)
    xs, ws = [], []
    for lo, hi in zip(bp[:-1], bp[1:]):
        xs.append(0.5*(hi-lo)*xg + 0.5*(hi+lo)); ws.append(0.5*(hi-lo)*wg)
    return np.concatenate(xs), np.concatenate(ws)

def kato_disk_quad(a, nu, c, Tend, K):
    d = c*nu
    r, wr = gauss_panels(1-d, 1.0, 24, 16)   # radial nodes in layer
    W = omega_nodes(a, K, r)
    s, ws = gauss_panels(0, np.sqrt(Tend), 30, 16, grade='left')
    jk2 = jz[:K]**2
    tot = 0.0
    for si, wi in zip(s, ws):
        t = si*si
        om = np.exp(-nu*jk2*t) @ W
        tot += wi*2*si*2*np.pi*np.sum(om*om*r*wr)
    return nu*tot

print("\nC7 disk kato (c=1):")
vals = []
for nu in [1e-2, 1e-3, 1e-4, 1e-5]:
    K = int(min(KMAX, max(4000, 3.3/(np.pi*c_nu) if (c_nu:=nu) else 0)))
    v = kato_disk_quad(a_rigid, nu, 1.0, T, K)
    vals.append(v)
    print(f"  nu={nu:8.0e} K={K:6d} v={v:.6e}")
print("  decreasing:", all(np.diff(vals) < 0), " final/initial:", vals[-1]/vals[0])

def kato_shear(nu, c, Tend, L=0.5):
    from scipy.integrate import quad
    def integrand_s(s):
        t = s*s
        sc = np.sqrt(2*nu*t)
        inner = sc*np.sqrt(np.pi)/2*special.erf(c*nu/sc) if sc > 0 else 0.0
        return 2*s*(1.0/(np.pi*nu*t))*inner*2*L
    val, _ = quad(integrand_s, 0, np.sqrt(Tend), limit=400)
    return nu*val

print("C7 shear kato (c=1):")
vals = []
for nu in [1e-2, 1e-3, 1e-4, 1e-5]:
    v = kato_shear(nu, 1.0, T)
    vals.append(v)
    print(f"  nu={nu:8.0e} v={v:.6e}")
print("  decreasing:", all(np.diff(vals) < 0), " final/initial:", vals[-1]/vals[0])
