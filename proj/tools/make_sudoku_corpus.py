#!/usr/bin/env python3
"""Generate the checked-in 9x9 Sudoku fixtures under data/sudoku/9x9.

Each puzzle has a unique solution. "easy" puzzles are solvable by naked and
hidden singles alone; "hard" ones are minimal under random clue removal and
are not. Output is deterministic for a given --seed.
"""

import argparse
import os
import random

N = 9
B = 3


def peers(cell):
    r, c = divmod(cell, N)
    out = set()
    for k in range(N):
        out.add(r * N + k)
        out.add(k * N + c)
    br, bc = (r // B) * B, (c // B) * B
    for rr in range(br, br + B):
        for cc in range(bc, bc + B):
            out.add(rr * N + cc)
    out.discard(cell)
    return out


PEERS = [peers(i) for i in range(N * N)]
UNITS = ([[r * N + c for c in range(N)] for r in range(N)]
         + [[r * N + c for r in range(N)] for c in range(N)]
         + [[(br + i // B) * N + bc + i % B for i in range(N)]
            for br in range(0, N, B) for bc in range(0, N, B)])


def candidates(grid, cell):
    used = {grid[p] for p in PEERS[cell]}
    return [d for d in range(1, N + 1) if d not in used]


def count_solutions(grid, limit=2):
    grid = list(grid)
    best, best_c = None, None
    for i in range(N * N):
        if grid[i] == 0:
            c = candidates(grid, i)
            if not c:
                return 0
            if best is None or len(c) < len(best_c):
                best, best_c = i, c
    if best is None:
        return 1
    total = 0
    for d in best_c:
        grid[best] = d
        total += count_solutions(grid, limit - total)
        if total >= limit:
            break
    return total


def random_full(rng):
    grid = [0] * (N * N)

    def fill(i):
        if i == N * N:
            return True
        digits = candidates(grid, i)
        rng.shuffle(digits)
        for d in digits:
            grid[i] = d
            if fill(i + 1):
                return True
        grid[i] = 0
        return False

    fill(0)
    return grid


def singles_solvable(grid):
    grid = list(grid)
    progress = True
    while progress:
        progress = False
        for i in range(N * N):
            if grid[i] == 0:
                c = candidates(grid, i)
                if len(c) == 1:
                    grid[i] = c[0]
                    progress = True
        for unit in UNITS:
            for d in range(1, N + 1):
                if any(grid[i] == d for i in unit):
                    continue
                spots = [i for i in unit if grid[i] == 0 and d in candidates(grid, i)]
                if len(spots) == 1:
                    grid[spots[0]] = d
                    progress = True
    return all(grid)


def make_puzzle(rng, easy):
    full = random_full(rng)
    grid = list(full)
    order = list(range(N * N))
    rng.shuffle(order)
    for cell in order:
        keep = grid[cell]
        grid[cell] = 0
        ok = count_solutions(grid) == 1
        if ok and easy:
            ok = singles_solvable(grid)
        if not ok:
            grid[cell] = keep
    return grid


def write(path, grid, difficulty):
    with open(path, "w") as f:
        f.write(f"# difficulty: {difficulty}\n{N}\n")
        for r in range(N):
            f.write(" ".join(str(grid[r * N + c]) if grid[r * N + c] else "."
                             for c in range(N)) + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data/sudoku/9x9")
    ap.add_argument("--easy", type=int, default=6)
    ap.add_argument("--hard", type=int, default=6)
    ap.add_argument("--seed", type=int, default=2013)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    os.makedirs(args.out, exist_ok=True)
    k = 0
    for difficulty, count in (("easy", args.easy), ("hard", args.hard)):
        made = 0
        while made < count:
            grid = make_puzzle(rng, difficulty == "easy")
            if difficulty == "hard" and singles_solvable(grid):
                continue
            write(os.path.join(args.out, f"p{k:02d}.sudoku"), grid, difficulty)
            k += 1
            made += 1


if __name__ == "__main__":
    main()
