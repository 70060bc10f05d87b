"""Survey both families over several characteristics and print the grid.

Run:  python3 demos/classification_grid.py
"""
from spinlab import classify, make_field

CHARS = (0, 3, 5, 7)


def grid(kind, ls):
    print(f"kind {kind}:  (cell = Jacobi verdict / simplicity)")
    head = "  l |" + "".join(f"  char {c or '0 (Q)':<6}" for c in CHARS)
    print(head)
    print("  --+" + "-" * (len(head) - 4))
    for l in ls:
        cells = []
        for ch in CHARS:
            r = classify(l, kind, make_field(ch))
            tag = "pass" if r.jacobi_pass else "FAIL"
            if r.simplicity == "certified":
                tag += "+simple"
            cells.append(f"  {tag:<10}")
        dims = classify(l, kind, make_field(0)).dims
        print(f"  {l} |" + "".join(cells) + f"   dims {dims}")
    print()


if __name__ == "__main__":
    grid("B", range(1, 7))
    grid("D", (2, 4, 6))
