#!/usr/bin/env python3
# Copyright 2026 The swarmex Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the bundled 0.1 m ASCII maps into maps/.

The output is deterministic. All features sit on even cell indices so the
maps downsample cleanly to 0.2 m.
"""

import argparse
import pathlib


class Canvas:
    def __init__(self, width, height):
        self.width = width
        self.height = height
        self.cells = [[False] * width for _ in range(height)]  # [y][x], y=0 south
        self.fill(0, 0, width, 1)
        self.fill(0, height - 1, width, 1)
        self.fill(0, 0, 1, height)
        self.fill(width - 1, 0, 1, height)

    def fill(self, x, y, w, h, value=True):
        for yy in range(max(0, y), min(self.height, y + h)):
            row = self.cells[yy]
            for xx in range(max(0, x), min(self.width, x + w)):
                row[xx] = value

    def clear(self, x, y, w, h):
        self.fill(x, y, w, h, False)

    def interior_ratio(self):
        occ = sum(
            self.cells[y][x]
            for y in range(1, self.height - 1)
            for x in range(1, self.width - 1)
        )
        return occ / ((self.width - 2) * (self.height - 2))

    def text(self):
        lines = []
        for y in range(self.height - 1, -1, -1):
            lines.append("".join("#" if c else "." for c in self.cells[y]))
        return "\n".join(lines) + "\n"


def empty_map():
    return Canvas(240, 240)


def house_map(corner=24, table=16):
    c = Canvas(240, 240)
    walls = [80, 160]
    door = 12
    for w in walls:
        c.fill(w, 0, 2, 240)
        c.fill(0, w, 240, 2)
    # One door in the middle of every wall segment between adjacent rooms.
    spans = [(1, 80), (82, 160), (162, 239)]
    for w in walls:
        for lo, hi in spans:
            mid = (lo + hi) // 2 // 2 * 2
            c.clear(w, mid - door // 2, 2, door)
            c.clear(mid - door // 2, w, door, 2)
    for rx, (x0, x1) in enumerate(spans):
        for ry, (y0, y1) in enumerate(spans):
            x0e = x0 + (x0 % 2)
            y0e = y0 + (y0 % 2)
            depth = corner * 5 // 6 // 2 * 2
            for cx, cy in ((x0e, y0e), (x1 - corner, y0e),
                           (x0e, y1 - depth), (x1 - corner, y1 - depth)):
                if rx == 0 and ry == 0 and cx == x0e and cy == y0e:
                    continue  # keep the start corner open
                c.fill(cx, cy, corner, depth)
            mx = ((x0 + x1) // 2 - table // 2) // 2 * 2
            my = ((y0 + y1) // 2 - table // 2) // 2 * 2
            c.fill(mx, my, table, table)
    return c


def tuned_house(target=0.27):
    best = None
    for corner in range(10, 40, 2):
        for table in range(0, 40, 2):
            ratio = house_map(corner, table).interior_ratio()
            err = abs(ratio - target)
            if best is None or err < best[0]:
                best = (err, corner, table)
    return house_map(best[1], best[2])


def factory_map():
    c = Canvas(300, 500)
    # Two partition walls split the floor into three halls with wide gates.
    for y in (166, 334):
        c.fill(0, y, 300, 2)
        c.clear(40, y, 30, 2)
        c.clear(230, y, 30, 2)
    # Machine rows with aisles between them.
    for hall_y0 in (20, 186, 354):
        for row in range(2):
            y = hall_y0 + row * 70
            for x in range(40, 260, 60):
                c.fill(x, y, 30, 40)
    return c


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=pathlib.Path(__file__).resolve().parent.parent / "maps")
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    maps = {"empty.txt": empty_map(), "house.txt": tuned_house(), "factory.txt": factory_map()}
    for name, canvas in maps.items():
        (out / name).write_text(canvas.text())
        print(f"{name}: {canvas.width}x{canvas.height} ratio {canvas.interior_ratio():.4f}")


if __name__ == "__main__":
    main()
