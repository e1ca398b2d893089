"""Maximal nested sets on the A_n Dynkin diagram are counted by Catalan
numbers and correspond to complete bracketings of n + 1 letters.

    python3 demos/nested_sets.py
"""

from qwmono.nested import format_bracketing, maximal_nested_sets, to_bracketing, type_a_diagram

for n in range(1, 6):
    diagram = type_a_diagram(n)
    mns = maximal_nested_sets(diagram)
    print("A%d: %d maximal nested sets" % (n, len(mns)))
    if n == 3:
        for f in mns:
            print("   ", format_bracketing(to_bracketing(diagram, f)))
