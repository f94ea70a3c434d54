"""C8/C9 T-sensitivity, C6 mass, mass_budget examples, C11 exponents."""
import numpy as np
from scipy import special

KMAX = 40000
jz = special.jn_zeros(1, KMAX)
J0z = special.j0(jz)
sgn = np.sign(J0z)
a_rigid = -sgn * 2.0*np.sqrt(np.pi)/jz
a_zm    = -sgn * 32.0*np.sqrt(np.pi)/jz**3

def gauss_panels(a, b, n_panels, order, grade=None, floor=1e-8):
    xg, wg = np.polynomial.legendre.leggauss(order)
    if grade == 'left':
        fr = np.geomspace(floor, 1.0, n_panels+1); bp = a + (b-a)*fr; bp[0] = a
    elif grade == 'right':
        fr = np.geomspace(floor, 1.0, n_panels+1)[::-1]; bp = b - (b-a)*fr; bp[-1] = b
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

def layer_l1(a, nu, delta, Tend, K, np_r=32, np_s=40):
    r, wr = gauss_panels(1-delta, 1.0, np_r, 16, grade='right')
    W = omega_nodes(a, K, r)
    s, ws = gauss_panels(0, np.sqrt(Tend), np_s, 16, grade='left')
    jk2 = jz[:K]**2
    tot = 0.0
    for si, wi in zip(s, ws):
        om = np.exp(-nu*jk2*si*si) @ W
        l1 = 2*np.pi*np.sum(np.abs(om)*r*wr)
        tot += wi*2*si*l1*l1
    return np.sqrt(tot)

print("C8 scaled values vs T:")
for T in [0.5, 1.0, 2.0]:
    vals = {}
    for delta in [1e-3, 1e-2]:
        for nu in [1e-5, 1e-4, 1e-3]:
            K = int(min(KMAX, max(4000, 100/(np.pi*delta))))
            vals[(delta, nu)] = layer_l1(a_rigid, nu, delta, T, K)*np.sqrt(nu/delta)
    med = np.median(list(vals.values()))
    print(f"  T={T}: " + " ".join(f"{v:.3f}" for v in vals.values()) +
          f"  max/med={max(vals.values())/med:.3f} min*2/med={2*min(vals.values())/med:.3f}")

print("\nC8 clause2 delta=nu incl 1e-2:")
vs = []
for nu in [1e-2, 1e-3, 1e-4, 1e-5]:
    K = int(min(KMAX, max(4000, 10/(np.pi*nu))))
    v = layer_l1(a_rigid, nu, nu, 1.0, K)
    vs.append(v); print(f"  nu={nu:.0e}: {v:.4e}")
print("  last/first:", vs[-1]/vs[0])

print("\nC9 L1/L2 at t=T/2 vs T (omega0=2):")
def lp_at(a, nu, t, K=8000):
    r, wr = gauss_panels(0, 1.0, 80, 16)
    W = omega_nodes(a, K, r)
    om = np.exp(-nu*jz[:K]**2*t) @ W
    return (2*np.pi*np.sum(np.abs(om)*r*wr), np.sqrt(2*np.pi*np.sum(om*om*r*wr)))
for T in [0.25, 0.5, 1.0]:
    l1s, l2s = [], []
    for nu in [1e-2, 1e-3, 1e-4, 1e-5]:
        l1, l2 = lp_at(a_rigid, nu, T/2)
        l1s.append(l1); l2s.append(l2)
    print(f"  T={T}: L1={['%.3f'%v for v in l1s]} var={(max(l1s)-min(l1s))/min(l1s):.3f}"
          f"  L2 ratio={l2s[-1]/l2s[0]:.2f}")
for T in [0.25, 0.5, 1.0]:
    l2s = [lp_at(a_zm, nu, T/2)[1] for nu in [1e-2, 1e-3, 1e-4, 1e-5]]
    print(f"  T={T}: zm L2 var={(max(l2s)-min(l2s))/min(l2s):.3f}")

print("\nC6 mass + no-slip (K=2000, nu=1e-3):")
K = 2000
need = int(np.ceil(10*jz[K-1]/(2*np.pi)))
r, wr = gauss_panels(0, 1.0, int(np.ceil(need/24)), 24)
W = omega_nodes(a_rigid, K, r)
worst = 0.0
for t in np.geomspace(1e-3, 1.0, 20):
    om = np.exp(-jz[:K]**2*1e-3*t) @ W
    worst = max(worst, abs(2*np.pi*np.sum(om*r*wr)))
print(f"  worst |(omega,1)| = {worst:.2e} with {len(r)} nodes")
# no-slip: velocity at r=1
uk1 = (a_rigid[:K]/(np.sqrt(np.pi)*np.abs(J0z[:K])))*special.j1(jz[:K]*1.0)
print(f"  |u(t=0.1,1)| = {abs(np.exp(-jz[:K]**2*1e-3*0.1) @ uk1):.2e}")

print("\nmass_budget: delta=2sqrt(nu), delta*=sqrt(nu), t=0.5, omega0=2:")
def smoothstep(s):
    s = np.clip(s, 0, 1); return 3*s*s - 2*s*s*s
for nu in [1e-2, 1e-3, 1e-4, 1e-5]:
    d, ds = 2*np.sqrt(nu), np.sqrt(nu)
    K = 4000
    r, wr = gauss_panels(0, 1.0, 120, 16)
    W = omega_nodes(a_rigid, K, r)
    om = np.exp(-nu*jz[:K]**2*0.5) @ W
    dist = 1 - r
    phid = np.where(dist <= ds, 1.0, np.where(dist >= d, 0.0, smoothstep((d - dist)/(d - ds))))
    cutoff_pair = 2*np.pi*np.sum(om*(1-phid)*r*wr)
    m = 2*np.pi
    print(f"  nu={nu:.0e}: |(om,1-phid) - m| = {abs(cutoff_pair - m):.4f}  (m={m:.4f})")
print("mass_budget delta=nu: M(outside layer):")
for nu in [1e-2, 1e-3, 1e-4]:
    K = 4000
    r, wr = gauss_panels(0, 1-nu, 120, 16)
    W = omega_nodes(a_rigid, K, r)
    om = np.exp(-nu*jz[:K]**2*0.5) @ W
    print(f"  nu={nu:.0e}: M(GdC)={2*np.pi*np.sum(om*r*wr):.4f} vs m={2*np.pi:.4f}")

print("\nC11 local exponents, disk flux phi=1:")
nus = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6]
fl = [-4*np.pi*np.sum((1-np.exp(-nu*jz**2))/jz**2) for nu in nus]
for i in range(4):
    e = np.log(fl[i+1]/fl[i])/np.log(nus[i+1]/nus[i])
    print(f"  {nus[i]:.0e}->{nus[i+1]:.0e}: local exp {e:.4f}  (|e-0.5|/0.5 = {abs(e-0.5)/0.5:.3f})")
