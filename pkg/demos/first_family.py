"""The first one-parameter family at a = g: stars and the plane x0 = 0."""
import sys

from k3lines.families import make_named
from k3lines.report import analyze, render_text

a = sys.argv[1] if len(sys.argv) > 1 else "g"
X, entry = make_named("ex61", {"a": a})
rep = analyze(X, jobs=4)
print(render_text(rep))
print("recorded:", entry.expected)
