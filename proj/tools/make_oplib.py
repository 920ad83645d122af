#!/usr/bin/env python3
"""Generate OP instances (.oplib) from TSPLIB .tsp files.

Conventions follow the standard OP benchmark construction:
  - COST_LIMIT = floor(TSP optimum / 2)
  - gen1: every score 1 (depot included)
  - gen2: s_j = 1 + (7141*(j-1) + 73) mod 100 for every node (0-based index
          in the formula; the depot gets 74)
  - gen3: s_j = 1 + floor(99 * d(depot,j) / theta) for every node,
          theta = max_j d(depot,j), distances in the instance metric
          (the depot gets 1)

Usage: make_oplib.py <in.tsp> <tsp_optimum> <gen1|gen2|gen3> <out.oplib>
"""
import math
import sys


def parse_tsp(path):
    header = {}
    coords = {}
    with open(path) as f:
        lines = [ln.rstrip("\n") for ln in f]
    i = 0
    while i < len(lines):
        s = lines[i].strip()
        i += 1
        if not s or s == "EOF":
            continue
        if s == "NODE_COORD_SECTION":
            dim = int(header["DIMENSION"])
            for _ in range(dim):
                parts = lines[i].split()
                i += 1
                coords[int(parts[0])] = (float(parts[1]), float(parts[2]))
            continue
        if ":" in s:
            k, v = s.split(":", 1)
            header[k.strip()] = v.strip()
    return header, coords


def dist(metric, a, b):
    dx, dy = a[0] - b[0], a[1] - b[1]
    if metric == "EUC_2D":
        return int(round(math.hypot(dx, dy)))
    if metric == "CEIL_2D":
        return int(math.ceil(math.hypot(dx, dy)))
    if metric == "ATT":
        r = math.sqrt((dx * dx + dy * dy) / 10.0)
        t = int(round(r))
        return t + 1 if t < r else t
    raise SystemExit(f"unsupported metric {metric}")


def scores(gen, header, coords):
    dim = int(header["DIMENSION"])
    metric = header["EDGE_WEIGHT_TYPE"]
    out = {}
    if gen == "gen1":
        for j in range(1, dim + 1):
            out[j] = 1
    elif gen == "gen2":
        for j in range(1, dim + 1):
            out[j] = 1 + (7141 * (j - 1) + 73) % 100
    elif gen == "gen3":
        theta = max(dist(metric, coords[1], coords[j]) for j in range(2, dim + 1))
        for j in range(1, dim + 1):
            out[j] = 1 + (99 * dist(metric, coords[1], coords[j])) // theta
    else:
        raise SystemExit(f"unknown generation {gen}")
    return out


def main():
    tsp, opt, gen, out_path = sys.argv[1], int(sys.argv[2]), sys.argv[3], sys.argv[4]
    header, coords = parse_tsp(tsp)
    dim = int(header["DIMENSION"])
    s = scores(gen, header, coords)
    name = f"{header['NAME'].split('.')[0]}-{gen}-50"
    with open(out_path, "w") as f:
        f.write(f"NAME : {name}\n")
        f.write(f"COMMENT : {header.get('COMMENT', '')}\n")
        f.write("TYPE : OP\n")
        f.write(f"DIMENSION : {dim}\n")
        f.write(f"COST_LIMIT : {opt // 2}\n")
        f.write(f"EDGE_WEIGHT_TYPE : {header['EDGE_WEIGHT_TYPE']}\n")
        f.write("NODE_COORD_SECTION\n")
        for j in range(1, dim + 1):
            x, y = coords[j]
            xs = int(x) if x == int(x) else x
            ys = int(y) if y == int(y) else y
            f.write(f"{j} {xs} {ys}\n")
        f.write("NODE_SCORE_SECTION\n")
        for j in range(1, dim + 1):
            f.write(f"{j} {s[j]}\n")
        f.write("DEPOT_SECTION\n1\n-1\nEOF\n")


if __name__ == "__main__":
    main()
