"""Reference module-level name events computed with CPython's symtable.

Used to produce the frozen expectations in tests/test_statements.cpp:

    python3 tests/oracles/scope_oracle.py 'def f(x):\n    return x + g\n'

Prints sorted module-level defined names and read names (all reads, including
reads that follow a binding inside the same statement).
"""
import symtable
import sys


def module_events(src):
    top = symtable.symtable(src, "<cell>", "exec")
    defs, uses = set(), set()
    for sym in top.get_symbols():
        if sym.is_referenced():
            uses.add(sym.get_name())
        if sym.is_assigned() or sym.is_imported():
            defs.add(sym.get_name())

    def walk(table):
        for child in table.get_children():
            for sym in child.get_symbols():
                name = sym.get_name()
                if sym.is_global() and sym.is_referenced():
                    uses.add(name)
                if sym.is_declared_global() and sym.is_assigned():
                    defs.add(name)
            walk(child)

    walk(top)
    return sorted(defs), sorted(uses)


if __name__ == "__main__":
    src = sys.argv[1].encode().decode("unicode_escape")
    d, u = module_events(src)
    print("defs=" + ",".join(d))
    print("uses=" + ",".join(u))
