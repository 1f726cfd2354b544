from hypothesis import given, strategies as st

from protoquipper.qtypes import one
from protoquipper.syntax import (
    QAPP, QABS, QCIRC, TRUE, Abs, App2, BoundVar, Con, FreeVar, abstract, box, crcons,
    dest_fun, false, fq, fqu, fquc, fun, get_boxed, instantiate, instantiate2, is_value,
    let_pair, mk_app, mk_circ, mk_fun, mk_let, mk_prod, newqvar, proper, quantum_data, qvar,
    star, true, unbox,
)


def test_mk_app_encoding():
    assert mk_app(true, star) == App2(App2(Con(QAPP), true), star)


def test_mk_circ_encoding():
    assert mk_circ(star, 3, star) == App2(App2(App2(Con(QCIRC), star), Con(crcons(3))), star)


def test_mk_fun_identity():
    assert mk_fun(BoundVar(0)) == App2(Con(QABS), Abs(BoundVar(0)))
    assert fun(lambda x: x) == mk_fun(BoundVar(0))


def test_instantiate_examples():
    assert instantiate(BoundVar(0), Con(TRUE)) == Con(TRUE)
    assert instantiate(mk_app(BoundVar(0), BoundVar(0)), true) == mk_app(true, true)
    body = App2(Con(QABS), Abs(BoundVar(1)))  # x. fun y. x
    assert instantiate(body, FreeVar(7)) == fun(lambda y: FreeVar(7))


def test_let_pair_binds_two():
    t = let_pair(mk_prod(true, false), lambda x, y: mk_prod(y, x))
    assert t == mk_let(mk_prod(BoundVar(0), BoundVar(1)), mk_prod(true, false))
    assert instantiate2(mk_prod(BoundVar(0), BoundVar(1)), true, false) == mk_prod(false, true)


def test_proper():
    assert not proper(BoundVar(0))
    assert proper(Abs(BoundVar(0)))
    assert proper(fun(lambda x: mk_app(x, FreeVar(1))))


def test_quantum_variable_lists():
    assert fq(mk_prod(qvar(0), qvar(1))) == [0, 1]
    c = mk_circ(qvar(2), 0, qvar(2))
    assert fq(c) == [] and fquc(c) == [2, 2]
    assert fqu(mk_prod(qvar(5), qvar(5))) == [5, 5]


def test_quantum_data_and_values():
    assert quantum_data(star)
    assert quantum_data(mk_prod(qvar(1), star))
    assert not quantum_data(true)
    assert is_value(star)
    assert is_value(mk_app(unbox, mk_circ(qvar(0), 0, qvar(0))))
    assert not is_value(mk_app(fun(lambda x: x), true))


def test_newqvar_and_get_boxed():
    assert newqvar(star) == 0
    assert newqvar(mk_prod(qvar(3), qvar(1))) == 4
    assert get_boxed(mk_app(box(one), star)) == [star]


# -- substitution against a named-variable oracle --------------------------

names = st.sampled_from(["a", "b", "c"])


def named_terms():
    leaf = st.one_of(names.map(lambda n: ("var", n)), st.just(("true",)))
    return st.recursive(
        leaf,
        lambda kids: st.one_of(
            st.tuples(st.just("lam"), names, kids),
            st.tuples(st.just("app"), kids, kids),
            st.tuples(st.just("prod"), kids, kids),
        ),
        max_leaves=8,
    )


def _free(t):
    tag = t[0]
    if tag == "var":
        return {t[1]}
    if tag == "true":
        return set()
    if tag == "lam":
        return _free(t[2]) - {t[1]}
    return _free(t[1]) | _free(t[2])


def _subst(t, x, s, fresh=[0]):
    tag = t[0]
    if tag == "var":
        return s if t[1] == x else t
    if tag == "true":
        return t
    if tag == "lam":
        y, body = t[1], t[2]
        if y == x:
            return t
        if y in _free(s):
            fresh[0] += 1
            z = f"z{fresh[0]}"
            body, y = _subst(body, y, ("var", z)), z
        return ("lam", y, _subst(body, x, s))
    return (tag, _subst(t[1], x, s), _subst(t[2], x, s))


ENV = {"a": FreeVar(100), "b": FreeVar(101), "c": FreeVar(102)}


_counter = iter(range(5000, 10**9))


def _to_db(t, env):
    tag = t[0]
    if tag == "var":
        return env.get(t[1], FreeVar(hash(t[1]) % 1000 + 1000))
    if tag == "true":
        return true
    if tag == "lam":
        v = FreeVar(next(_counter))
        return mk_fun(abstract(_to_db(t[2], {**env, t[1]: v}), v))
    mk = mk_app if tag == "app" else mk_prod
    return mk(_to_db(t[1], env), _to_db(t[2], env))


@given(named_terms(), named_terms())
def test_instantiate_matches_named_substitution(body, arg):
    lam = _to_db(("lam", "a", body), {k: v for k, v in ENV.items() if k != "a"})
    env = {k: v for k, v in ENV.items() if k != "a"}
    expected = _to_db(_subst(body, "a", arg), {**env, "a": ENV["a"]})
    got = instantiate(dest_fun(lam), _to_db(arg, {**env, "a": ENV["a"]}))
    assert got == expected


@given(named_terms())
def test_abstract_then_instantiate_is_identity(t):
    term = _to_db(t, ENV)
    assert instantiate(abstract(term, FreeVar(100)), FreeVar(100)) == term
