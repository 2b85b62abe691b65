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
"""Regenerates data/reference.matrix.csv.

The arbitration rules of the reference architecture are restated here
without timing: start in nominal operation, inject the primary failure and
let the rules settle to a fixpoint, then inject the secondary failure and
settle again. The mode holding at the end is the matrix cell. This file
does not read the model; it is a second, independent account of it.
"""

import argparse
import sys

NOMINAL = ["DS1", "VC1", "BR1", "EPS1"]
FALLBACK = ["VC2", "BR2", "EPS2"]
MACHINES = NOMINAL + FALLBACK

FUNCTION = {
    "DS1": "FunctionDS1", "VC1": "FunctionVC1", "BR1": "BrakingFunction1",
    "EPS1": "SteeringFunction1", "VC2": "FunctionVC2", "BR2": "BrakingFunction2",
    "EPS2": "SteeringFunction2",
}

BUSES = {
    "N": [("VC1", "DS1"), ("BR1", "DS1"), ("EPS1", "DS1"), ("DS1", "VC1"), ("BR1", "VC1"),
          ("EPS1", "VC1"), ("VC1", "BR1"), ("EPS1", "BR1"), ("VC1", "EPS1"), ("BR1", "EPS1")],
    "F": [("BR2", "VC2"), ("EPS2", "VC2"), ("VC2", "BR2"), ("VC2", "EPS2")],
    "X1": [("DS1", "VC2"), ("VC1", "VC2")],
    "X2": [("BR1", "VC2"), ("EPS1", "VC2"), ("VC2", "BR1"), ("VC2", "EPS1")],
    "X3": [("BR1", "BR2"), ("EPS1", "BR2"), ("BR1", "EPS2"), ("EPS1", "EPS2"), ("VC2", "DS1")],
}

POWER = {
    "PowerSupplyNominal": NOMINAL,
    "PowerSupplyFallback": FALLBACK,
    "PowerModuleCtrl1": ["DS1", "VC1"],
    "PowerModuleAct1": ["BR1", "EPS1"],
}


def catalog():
    """Failure name -> (dead machines, dead links, function-failed machine)."""
    out = {}
    for m in MACHINES:
        out[FUNCTION[m]] = (set(), set(), m)
    for m in MACHINES:
        links = {l for ls in BUSES.values() for l in ls if m in l}
        out["Ecu" + m] = ({m}, links, None)
    for ls in BUSES.values():
        for s, r in ls:
            out[f"Link_{s}_{r}"] = (set(), {(s, r)}, None)
    for b, ls in BUSES.items():
        out["Bus" + b] = (set(), set(ls), None)
    for name, ms in POWER.items():
        links = {l for ls in BUSES.values() for l in ls if l[0] in ms or l[1] in ms}
        out[name] = (set(ms), links, None)
    return out


BAD = {"Passive", "Failure", "NoSignal"}


class System:
    def __init__(self):
        self.state = {m: "Active" for m in NOMINAL}
        self.state.update({m: "Ready" for m in FALLBACK})
        self.dead = set()
        self.silent = set()
        self.ff = set()

    def inject(self, failure):
        dead, links, fn = catalog()[failure]
        self.dead |= dead
        self.silent |= links
        if fn:
            self.ff.add(fn)

    def seen(self, sender, receiver):
        if (sender, receiver) in self.silent:
            return "NoSignal"
        return self.state[sender]

    def next_state(self, m):
        st = self.state[m]
        if m in self.dead:
            return "Failure"
        see = lambda x: self.seen(x, m)
        bad = lambda x: see(x) in BAD
        if m in self.ff:
            return {"Ready": "Failure", "Active": "Passive"}.get(st, st)
        if st == "Active":
            drop = {
                "DS1": bad("VC1") or bad("BR1") or bad("EPS1") or see("VC2") == "Active",
                "VC1": bad("DS1") or bad("BR1") or bad("EPS1"),
                "BR1": bad("EPS1") or (bad("VC1") and bad("VC2"))
                or (see("VC1") == "Active" and see("VC2") == "Active"),
                "EPS1": bad("BR1") or (bad("VC1") and bad("VC2"))
                or (see("VC1") == "Active" and see("VC2") == "Active"),
                "VC2": bad("BR2") or bad("EPS2")
                or (see("BR1") == "Active" and see("EPS1") == "Active"
                    and (see("BR2") == "Active" or see("EPS2") == "Active")),
                "BR2": bad("VC2"),
                "EPS2": bad("VC2"),
            }[m]
            return "Passive" if drop else st
        if st == "Ready":
            if m == "VC2":
                if bad("BR2") or bad("EPS2"):
                    return "Failure"
                takeover_act = bad("BR1") and bad("EPS1") and (bad("DS1") or bad("VC1"))
                takeover_ctrl = (bad("DS1") and bad("VC1") and not takeover_act
                                 and (see("BR1") == "Active" or see("EPS1") == "Active"))
                return "Active" if takeover_ctrl or takeover_act else st
            if m in ("BR2", "EPS2"):
                if bad("VC2"):
                    return "Failure"
                return "Active" if see("VC2") == "Active" and bad("BR1") and bad("EPS1") else st
        return st

    def settle(self):
        for _ in range(100):
            nxt = {m: self.next_state(m) for m in MACHINES}
            if nxt == self.state:
                return
            self.state = nxt
        raise RuntimeError("rules do not settle")

    def mode(self):
        s = self.state
        act = lambda ms: all(s[m] == "Active" for m in ms)
        nact = lambda ms: all(s[m] != "Active" for m in ms)
        modes = []
        if act(NOMINAL) and all(s[m] == "Ready" for m in FALLBACK):
            modes.append("NO")
        if act(NOMINAL) and nact(FALLBACK) and not all(s[m] == "Ready" for m in FALLBACK):
            modes.append("FB1")
        if act(["VC2", "BR1", "EPS1"]) and nact(["DS1", "VC1", "BR2", "EPS2"]):
            modes.append("FB2")
        if act(FALLBACK) and nact(NOMINAL):
            modes.append("FB3")
        if nact(MACHINES):
            modes.append("Inactive")
        if len(modes) != 1:
            raise RuntimeError(f"settled state {s} holds modes {modes}")
        return modes[0]


def target(first, second=None):
    sysm = System()
    sysm.inject(first)
    sysm.settle()
    if second:
        sysm.inject(second)
        sysm.settle()
    return sysm.mode()


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-o", "--out", default="-", help="output CSV (default stdout)")
    args = ap.parse_args()
    names = list(catalog())
    rows = ["primary\\secondary," + ",".join(names)]
    for a in names:
        rows.append(a + "," + ",".join(target(a, None if a == b else b) for b in names))
    text = "\n".join(rows) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as f:
            f.write(text)


if __name__ == "__main__":
    main()
