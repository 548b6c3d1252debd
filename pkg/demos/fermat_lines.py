"""Lines on the Fermat quartic over GF(3): count, one profile, the graph."""
from k3lines import gf3
from k3lines.exact_lines import lines_exact
from k3lines.graph import build_graph, find_triangles_stars
from k3lines.line_analysis import line_profile
from k3lines.surface import new_surface

F = gf3.make_field(1)
X = new_surface("x0^4 + x1^4 + x2^4 + x3^4", F)
ls = lines_exact(X)
print("lines:", len(ls), "complete:", ls.complete)
print("fields of definition:", sorted({l.ctx.name for l in ls}))

p = line_profile(X, ls[0], ls)
print("line", ls[0].fmt())
print("  degree %d, separable %s, %s, cuspidal %s" % (p.degree, p.separable, p.fibration, p.cuspidal))
print("  type (p,q) = %s, valency %d" % (p.pq, p.valency))

G = build_graph(X, ls)
tri, stars, _ = find_triangles_stars(G)
print("degrees:", sorted(set(G.degree_sequence())), "triangles:", len(tri), "stars:", len(stars))
