//! Derived term builders: contractibility, equivalences, path algebra and
//! square packaging, all assembled from the primitive formers.
//!
//! Everything here is a pure construction; the checker validates the
//! results. None of the builders use interval operators, so they are valid
//! in every theory. Scope conventions follow the rest of the crate: inputs
//! are over an ambient context G and outputs land in the same G, with all
//! internal shifting handled here.

use crate::cofsolve::Cof;
use crate::interval::IntervalTerm;
use crate::syntax::{
    app_s, arrow, fill_multi, i0, i1, ivar, open_interval, pair, papp, papp_s, path_ty, pi, plam,
    shift, shift_ivl, sigma, snd, subst, var, Subst, SubstEntry, Term,
};

/// `(c : T) * ((x : T) -> c ~[T] x)`: a centre and a contraction.
pub fn is_contr(t: &Term) -> Term {
    sigma(
        t.clone(),
        pi(
            shift(t, 1, 0),
            path_ty(shift(t, 3, 0), var(1), var(0)),
        ),
    )
}

/// `(a : A) * (f a ~[B] b)` for `f : A -> B` and `b : B`.
pub fn fiber(a_ty: &Term, b_ty: &Term, f: &Term, b: &Term) -> Term {
    sigma(
        a_ty.clone(),
        path_ty(
            shift(b_ty, 2, 0),
            app_s(&shift(f, 1, 0), &var(0)),
            shift(b, 1, 0),
        ),
    )
}

/// `(b : B) -> is-contr (fiber f b)`.
pub fn is_equiv(a_ty: &Term, b_ty: &Term, f: &Term) -> Term {
    pi(
        b_ty.clone(),
        is_contr(&fiber(
            &shift(a_ty, 1, 0),
            &shift(b_ty, 1, 0),
            &shift(f, 1, 0),
            &var(0),
        )),
    )
}

/// `(f : A -> B) * is-equiv f`.
pub fn equiv_ty(a_ty: &Term, b_ty: &Term) -> Term {
    sigma(
        arrow(a_ty.clone(), b_ty.clone()),
        is_equiv(&shift(a_ty, 1, 0), &shift(b_ty, 1, 0), &var(0)),
    )
}

/// The identity function packaged as an equivalence of `A` with itself.
/// The fiber over `b` is `(a : A) * (a ~ b)`; it contracts from
/// `(b, <_> b)` onto `y` along the square
/// `fill^{1->j} (k. A) [i=0 -> b | i=1 -> y.2] b`,
/// whose `j=0` edge carries the point and whose slices carry the path.
pub fn id_equiv(a_ty: &Term) -> Term {
    // contraction body lives under [G, b, y, i] plus d inner binders
    let sq = |d: usize, dst: IntervalTerm| -> Term {
        fill_multi(
            i1(),
            dst,
            shift(a_ty, (4 + d) as isize, 0),
            vec![
                (Cof::eq(ivar(d), i0()), var(d + 4)),
                (Cof::eq(ivar(d), i1()), papp(snd(var(d + 3)), ivar(0))),
            ],
            var(d + 2),
        )
    };
    let contraction = plam(pair(sq(0, i0()), plam(sq(1, ivar(0)))));
    pair(
        Term::Lam(Box::new(var(0))),
        Term::Lam(Box::new(pair(
            pair(var(0), refl_path(&var(0))),
            Term::Lam(Box::new(contraction)),
        ))),
    )
}

/// `<i> a`: the degenerate path at `a`.
pub fn refl_path(a: &Term) -> Term {
    plam(shift(a, 1, 0))
}

/// Path symmetry by filling: `<i> fill^{0->1} (j. A) [i=0 -> p | i=1 -> a] a`.
/// At `i=0` the filler runs along `p`, ending at `b`; at `i=1` it stays at
/// `a`; so the whole line runs from `b` back to `a`.
pub fn sym(a_ty: &Term, a: &Term, p: &Term) -> Term {
    // branch bodies live under [G, i, w, j]
    plam(fill_multi(
        i0(),
        i1(),
        shift(a_ty, 2, 0),
        vec![
            (
                Cof::eq(ivar(0), i0()),
                papp_s(&shift(p, 3, 0), ivar(0)),
            ),
            (Cof::eq(ivar(0), i1()), shift(a, 3, 0)),
        ],
        shift(a, 1, 0),
    ))
}

/// Path composition by filling: the cap travels along `p` while the `i=1`
/// face travels along `q`, so the `dst` face runs from `a` to `c`.
pub fn trans(a_ty: &Term, a: &Term, p: &Term, q: &Term) -> Term {
    plam(fill_multi(
        i0(),
        i1(),
        shift(a_ty, 2, 0),
        vec![
            (Cof::eq(ivar(0), i0()), shift(a, 3, 0)),
            (
                Cof::eq(ivar(0), i1()),
                papp_s(&shift(q, 3, 0), ivar(0)),
            ),
        ],
        papp_s(&shift(p, 1, 0), ivar(0)),
    ))
}

/// `<i> f (p @ i)`.
pub fn cong(f: &Term, p: &Term) -> Term {
    plam(app_s(&shift(f, 1, 0), &papp_s(&shift(p, 1, 0), ivar(0))))
}

/// The singleton type `(x : A) * (a ~[A] x)`.
pub fn singleton_ty(a_ty: &Term, a: &Term) -> Term {
    sigma(
        a_ty.clone(),
        path_ty(shift(a_ty, 2, 0), shift(a, 1, 0), var(0)),
    )
}

/// Body of the contraction of `singleton_ty(a_ty, a)`, abstracted over the
/// singleton `y = (x, p)` at index 0: a path from `(a, <_> a)` to `y`.
///
/// Both components come from one square
/// `sq(i, j) = fill^{0->j} (k. A) [i=0 -> a | i=1 -> p] a`:
/// the first traverses its `j=1` edge, the second is its `i`-slice.
fn singleton_contraction_at(a_ty: &Term, a: &Term) -> Term {
    // scope inside: [G, y, i] plus d extra binders
    let sq = |d: usize, dst: IntervalTerm| -> Term {
        fill_multi(
            i0(),
            dst,
            shift(a_ty, (3 + d) as isize, 0),
            vec![
                (Cof::eq(ivar(d), i0()), shift(a, (4 + d) as isize, 0)),
                (
                    Cof::eq(ivar(d), i1()),
                    papp(snd(var(3 + d)), ivar(0)),
                ),
            ],
            shift(a, (2 + d) as isize, 0),
        )
    };
    plam(pair(sq(0, i1()), plam(sq(1, ivar(0)))))
}

/// A proof of `is-contr ((x : A) * (a ~ x))`, centred at `(a, <_> a)`.
pub fn singleton_contr(a_ty: &Term, a: &Term) -> Term {
    pair(
        pair(a.clone(), refl_path(a)),
        Term::Lam(Box::new(singleton_contraction_at(a_ty, a))),
    )
}

/// `a2[r, i1]`: instantiates the outer interval binder of a two-interval
/// line, keeping the inner one.
pub fn set_outer_interval(a2: &Term, r: IntervalTerm) -> Term {
    let s = Subst {
        entries: vec![
            SubstEntry::Interval(ivar(0)),
            SubstEntry::Interval(shift_ivl(&r, 1, 0)),
        ],
        tail: -1,
    };
    subst(a2, &s)
}

/// `a2[i0, s]`: instantiates the inner interval binder, keeping the outer.
pub fn set_inner_interval(a2: &Term, s: IntervalTerm) -> Term {
    open_interval(a2, shift_ivl(&s, 1, 0))
}

/// `a2[r, s]`.
pub fn at_corners(a2: &Term, r: IntervalTerm, s: IntervalTerm) -> Term {
    open_interval(&set_inner_interval(a2, s), r)
}

/// The type of squares in the two-interval line `a2` whose antidiagonal
/// corners are pinned to `ta` at `(0,1)` and `tb` at `(1,0)`:
///
/// components `(c00, c11, b, t, l, r, sq)` where
///   b : c00 ~ tb along i0 at i1=0      t : ta ~ c11 along i0 at i1=1
///   l : c00 ~ ta along i1 at i0=0      r : tb ~ c11 along i1 at i0=1
///   sq : Path (i0. Path (i1. a2) (b@i0) (t@i0)) l r
pub fn square_ty(a2: &Term, ta: &Term, tb: &Term) -> Term {
    let sq_ty = path_ty(
        path_ty(
            shift(a2, 6, 2),
            papp(var(4), ivar(0)),
            papp(var(3), ivar(0)),
        ),
        var(1),
        var(0),
    );
    sigma(
        at_corners(a2, i0(), i0()),
        sigma(
            shift(&at_corners(a2, i1(), i1()), 1, 0),
            sigma(
                path_ty(shift(&set_inner_interval(a2, i0()), 2, 1), var(1), shift(tb, 2, 0)),
                sigma(
                    path_ty(shift(&set_inner_interval(a2, i1()), 3, 1), shift(ta, 3, 0), var(1)),
                    sigma(
                        path_ty(shift(&set_outer_interval(a2, i0()), 4, 1), var(3), shift(ta, 4, 0)),
                        sigma(
                            path_ty(
                                shift(&set_outer_interval(a2, i1()), 5, 1),
                                shift(tb, 5, 0),
                                var(3),
                            ),
                            sq_ty,
                        ),
                    ),
                ),
            ),
        ),
    )
}

/// Packages a two-interval body `b2` (over `[G, i0, i1]`) as an inhabitant
/// of `square_ty(a2, b2[0,1], b2[1,0])`: the corners and edges are the
/// restrictions of `b2`, the square is `b2` itself.
pub fn square_tuple(b2: &Term) -> Term {
    pair(
        at_corners(b2, i0(), i0()),
        pair(
            at_corners(b2, i1(), i1()),
            pair(
                plam(set_inner_interval(b2, i0())),
                pair(
                    plam(set_inner_interval(b2, i1())),
                    pair(
                        plam(set_outer_interval(b2, i0())),
                        pair(
                            plam(set_outer_interval(b2, i1())),
                            plam(plam(b2.clone())),
                        ),
                    ),
                ),
            ),
        ),
    )
}

/// The square stored in a `square_ty` tuple.
pub fn square_proj(tuple: Term) -> Term {
    let mut t = tuple;
    for _ in 0..6 {
        t = snd(t);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::print::print_term;

    #[test]
    fn builders_are_well_scoped_over_closed_inputs() {
        // closed inputs must give closed outputs: shifting by a large
        // amount at cutoff 0 must be the identity on every binder-internal
        // index, which `shift` would break on a stray free variable by
        // producing a different term
        for t in [
            is_contr(&Term::UnitTy),
            equiv_ty(&Term::UnitTy, &Term::UnitTy),
            is_equiv(&Term::UnitTy, &Term::UnitTy, &Term::Lam(Box::new(var(0)))),
            singleton_ty(&Term::UnitTy, &Term::TT),
            singleton_contr(&Term::UnitTy, &Term::TT),
            sym(&Term::UnitTy, &Term::TT, &refl_path(&Term::TT)),
            trans(&Term::UnitTy, &Term::TT, &refl_path(&Term::TT), &refl_path(&Term::TT)),
            cong(&Term::Lam(Box::new(var(0))), &refl_path(&Term::TT)),
            id_equiv(&Term::UnitTy),
            square_ty(&Term::UnitTy, &Term::TT, &Term::TT),
            square_tuple(&Term::TT),
        ] {
            assert_eq!(shift(&t, 5, 0), t, "not closed: {}", print_term(&t));
        }
    }

    #[test]
    fn square_projection_unpacks_the_tuple() {
        let tup = square_tuple(&Term::TT);
        match square_proj(tup) {
            Term::Snd(_) => {}
            other => panic!("expected a projection spine, got {other:?}"),
        }
    }

    #[test]
    fn interval_instantiation_helpers() {
        // a2 = El (PApp of a code at both intervals), over [i0, i1]
        let a2 = Term::El(Box::new(papp(
            papp(Term::Const("c".into()), ivar(1)),
            ivar(0),
        )));
        let corner = at_corners(&a2, i0(), i1());
        assert_eq!(
            corner,
            Term::El(Box::new(papp(papp(Term::Const("c".into()), i0()), i1())))
        );
        let outer = set_outer_interval(&a2, i1());
        assert_eq!(
            outer,
            Term::El(Box::new(papp(papp(Term::Const("c".into()), i1()), ivar(0))))
        );
        let inner = set_inner_interval(&a2, i0());
        assert_eq!(
            inner,
            Term::El(Box::new(papp(papp(Term::Const("c".into()), ivar(0)), i0())))
        );
    }
}
