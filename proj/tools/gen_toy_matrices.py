#!/usr/bin/env python3
# Copyright (c) 2026, The fov authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the failure matrices of the toy models in data/toys.

Same procedure as gen_reference_matrix.py: settle in nominal operation,
inject the primary, settle, inject the secondary, settle, read the mode.
The rules are restated by hand; the .fom files are not read.
"""

import argparse
import os

BAD = {"Passive", "Failure", "NoSignal"}


class Toy:
    machines = []
    failures = {}  # name -> (dead machines, silenced (sender, receiver) links, function-failed machine)
    nominal = {}

    def __init__(self):
        self.state = dict(self.nominal)
        self.dead, self.silent, self.ff = set(), set(), set()

    def inject(self, name):
        dead, links, fn = self.failures[name]
        self.dead |= set(dead)
        self.silent |= set(links)
        if fn:
            self.ff.add(fn)

    def see(self, sender, receiver):
        if (sender, receiver) in self.silent or sender in self.dead:
            return "NoSignal"
        return self.state[sender]

    def settle(self):
        for _ in range(50):
            nxt = {}
            for m in self.machines:
                if m in self.dead:
                    nxt[m] = "Failure"
                else:
                    nxt[m] = self.rule(m, self.state[m], lambda x, m=m: self.see(x, m))
            if nxt == self.state:
                return
            self.state = nxt
        raise RuntimeError(f"{type(self).__name__}: rules do not settle")

    def mode(self):
        held = [name for name, pred in self.modes() if pred(self.state)]
        if len(held) != 1:
            raise RuntimeError(f"{type(self).__name__}: {self.state} holds {held}")
        return held[0]


class Asym(Toy):
    machines = ["U"]
    failures = {"FA": ((), (), "FA"), "FB": ((), (), "FB")}
    nominal = {"U": "Ready"}

    def rule(self, m, st, see):
        if st == "Ready" and "FB" in self.ff:
            return "Failure"
        if st == "Ready" and "FA" in self.ff:
            return "Active"
        return st

    def modes(self):
        return [("NO", lambda s: s["U"] == "Ready"),
                ("DEG", lambda s: s["U"] == "Active"),
                ("Inactive", lambda s: s["U"] == "Failure")]


class Duplex(Toy):
    machines = ["M1", "M2"]
    links = [("M1", "M2"), ("M2", "M1")]
    failures = {
        "FunctionM1": ((), (), "M1"),
        "FunctionM2": ((), (), "M2"),
        "EcuM1": (("M1",), (), None),
        "EcuM2": (("M2",), (), None),
        "LinkL12": ((), (("M1", "M2"),), None),
        "PowerP": (("M1", "M2"), (), None),
    }
    nominal = {"M1": "Active", "M2": "Ready"}

    def rule(self, m, st, see):
        failed = m in self.ff
        if failed:
            return {"Ready": "Failure", "Active": "Passive"}.get(st, st)
        if m == "M1" and st == "Active" and see("M2") == "Active":
            return "Passive"
        if m == "M2" and st == "Ready" and see("M1") in BAD:
            return "Active"
        return st

    def modes(self):
        return [("NO", lambda s: s["M1"] == "Active" and s["M2"] != "Active"),
                ("DEG", lambda s: s["M2"] == "Active" and s["M1"] != "Active"),
                ("Inactive", lambda s: s["M1"] != "Active" and s["M2"] != "Active")]


class Chain(Toy):
    machines = ["C1", "C2", "A"]
    failures = {
        "FunctionC1": ((), (), "C1"),
        "FunctionC2": ((), (), "C2"),
        "FunctionA": ((), (), "A"),
        "EcuC1": (("C1",), (), None),
        "EcuA": (("A",), (), None),
        "BusBN": ((), (("C1", "A"), ("A", "C1")), None),
        "Link_C1_C2": ((), (("C1", "C2"),), None),
        "PowerPM": (("C1", "A"), (), None),
    }
    nominal = {"C1": "Active", "C2": "Ready", "A": "Active"}

    def rule(self, m, st, see):
        if m in self.ff:
            return {"Ready": "Failure", "Active": "Passive"}.get(st, st)
        bad = lambda x: see(x) in BAD
        act = lambda x: see(x) == "Active"
        if m == "C1" and st == "Active" and (bad("A") or act("C2")):
            return "Passive"
        if m == "C2" and st == "Ready":
            if bad("A"):
                return "Failure"
            if bad("C1") and act("A"):
                return "Active"
        if m == "C2" and st == "Active" and bad("A"):
            return "Passive"
        if m == "A" and st == "Ready" and (act("C1") or act("C2")) and not (act("C1") and act("C2")):
            return "Active"
        if m == "A" and st == "Active" and ((bad("C1") and bad("C2")) or (act("C1") and act("C2"))):
            return "Passive"
        return st

    def modes(self):
        return [("NO", lambda s: s["C1"] == "Active" and s["A"] == "Active" and s["C2"] != "Active"),
                ("DEG", lambda s: s["C2"] == "Active" and s["A"] == "Active" and s["C1"] != "Active"),
                ("Inactive", lambda s: all(s[m] != "Active" for m in ("C1", "C2", "A")))]


def target(toy, first, second=None):
    t = toy()
    t.settle()
    t.inject(first)
    t.settle()
    if second:
        t.inject(second)
        t.settle()
    return t.mode()


def matrix(toy):
    names = list(toy.failures)
    rows = ["primary\\secondary," + ",".join(names)]
    for a in names:
        rows.append(a + "," + ",".join(target(toy, a, None if a == b else b) for b in names))
    return "\n".join(rows) + "\n"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-d", "--dir", default=os.path.join(os.path.dirname(__file__), "..", "data", "toys"))
    args = ap.parse_args()
    for name, toy in (("asym", Asym), ("duplex", Duplex), ("chain", Chain)):
        with open(os.path.join(args.dir, name + ".matrix.csv"), "w") as f:
            f.write(matrix(toy))


if __name__ == "__main__":
    main()
