"""Parameter table of the Euclidean construction over GF(2), GF(3) and GF(4).

    python3 demos/parameter_table.py
"""

from qconvbch.cli import run_sweep

rows = run_sweep("quantum-euclid", range(3, 64), [2, 3, 4])
print(f"{'n':>3} {'q':>2} {'delta':>5}  {'parameters':18s} {'kappa':>5} {'df>=':>4} {'purity':>6}")
for r in rows:
    if r["status"] != "ok":
        continue
    purity = r["purity_bound"]["value"] if r["purity_bound"] else "-"
    print(f"{r['n']:3d} {r['q']:2d} {r['delta']:5d}  {r['parameters']:18s} {r['kappa']:5d} "
          f"{r['bounds']['df_lower']['value']:4d} {purity:>6}")
skipped = sum(r["status"] != "ok" for r in rows)
print(f"\n{skipped} parameter points outside the admissible range were skipped")
