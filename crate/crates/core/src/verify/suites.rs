//! The shipped identity suites.

use crate::braces::{bracket, cup, getzler_associator, mu_squared, tetrabrace, total_compose, tribrace, BinaryMu};
use crate::coboundary::{
    cup_commutator, right_adjoint_action, tribrace_deviation_via_bracket, tribrace_deviation_via_compose,
    CoboundaryContext,
};
use crate::cohomology::CochainComplex;
use crate::error::Result;
use crate::op::{apply, coapply, entry_count, partial_compose, MultiOp, Variance};
use crate::rational::Rational;
use crate::scalar::Scalar;
use crate::sign::Sign;

use super::case::all;
use super::{Case, IdentitySuite, SuiteRegistry, Verdict};

const ENDO_ONLY: &[Variance] = &[Variance::Endo];

/// Target spaces of exact solves are capped at this many coefficients.
const SOLVE_CAP: usize = 256;

macro_rules! suite {
    (
        $ty:ident, $name:literal, $stmt:literal,
        $(variances = $var:expr,)?
        $(max_dim = $md:expr,)?
        |$case:ident| $body:block
    ) => {
        pub struct $ty;

        impl<S: Scalar> IdentitySuite<S> for $ty {
            fn name(&self) -> &'static str {
                $name
            }
            fn statement(&self) -> &'static str {
                $stmt
            }
            $(fn variances(&self) -> &'static [Variance] {
                $var
            })?
            $(fn max_dim(&self) -> usize {
                $md
            })?
            fn check(&self, $case: &mut Case<S>) -> Result<Verdict> $body
        }
    };
}

pub fn register_all<S: Scalar>(reg: &mut SuiteRegistry<S>) {
    reg.register(Box::new(CompositionRelations));
    reg.register(Box::new(UnitLaws));
    reg.register(Box::new(Parenthesization));
    reg.register(Box::new(CupIsBrace));
    reg.register(Box::new(Getzler));
    reg.register(Box::new(GerstenhaberSymmetry));
    reg.register(Box::new(Antisymmetry));
    reg.register(Box::new(Jacobi));
    reg.register(Box::new(CupAssociator));
    reg.register(Box::new(RightTranslation));
    reg.register(Box::new(MicroAssociator));
    reg.register(Box::new(CoboundaryFormulas));
    reg.register(Box::new(BracketDerivation));
    reg.register(Box::new(Commutation));
    reg.register(Box::new(SquareIsMuSquaredAction));
    reg.register(Box::new(SquareVanishes));
    reg.register(Box::new(CupDeviation));
    reg.register(Box::new(CupDerivation));
    reg.register(Box::new(CupCommutatorDeviation));
    reg.register(Box::new(TribraceDeviationCompose));
    reg.register(Box::new(TribraceDeviationBracket));
    reg.register(Box::new(ComplexProperty));
    reg.register(Box::new(CupCommutatorExact));
    reg.register(Box::new(LeibnizExact));
    reg.register(Box::new(DegreeBookkeeping));
}

// ---------------------------------------------------------------- operad axioms

suite!(
    CompositionRelations,
    "operad.composition",
    "(h∘i f)∘j g obeys the three-case composition relations",
    |case| {
        let (dh, df, dg) = (case.degree(), case.degree(), case.degree());
        if dh == 0 {
            return Ok(Verdict::Skip);
        }
        let h = case.op("h", dh)?;
        let f = case.op("f", df)?;
        let g = case.op("g", dg)?;
        let (fr, gr) = (f.reduced(), g.reduced());
        let swap = Sign::pow(fr * gr);
        let mut verdicts = Vec::new();
        for i in 0..dh {
            let hf = partial_compose(&h, &f, i)?;
            let ii = i as i64;
            for j in 0..hf.deg() {
                let jj = j as i64;
                let lhs = partial_compose(&hf, &g, j)?;
                let rhs = if jj < ii {
                    partial_compose(&partial_compose(&h, &g, j)?, &f, (ii + gr) as usize)?.signed(swap)
                } else if jj <= ii + fr {
                    partial_compose(&h, &partial_compose(&f, &g, j - i)?, i)?
                } else {
                    partial_compose(&partial_compose(&h, &g, (jj - fr) as usize)?, &f, i)?.signed(swap)
                };
                verdicts.push(case.expect_eq(&format!("(i, j) = ({i}, {j})"), &lhs, &rhs)?);
            }
        }
        Ok(all(verdicts))
    }
);

suite!(UnitLaws, "operad.unit", "𝕀∘0 f = f = f∘i 𝕀", |case| {
    let f = case.random_op("f")?;
    let unit = MultiOp::identity(case.dim, case.variance)?;
    let mut verdicts = vec![case.expect_eq("𝕀∘0 f", &partial_compose(&unit, &f, 0)?, &f)?];
    for i in 0..f.deg() {
        verdicts.push(case.expect_eq(&format!("f∘{i} 𝕀"), &partial_compose(&f, &unit, i)?, &f)?);
    }
    Ok(all(verdicts))
});

suite!(
    Parenthesization,
    "operad.parenthesization",
    "f∘i g evaluates as (-1)^{i|g|} f(.., g(..), ..) (coendo: (1⊗g⊗1)∘f)",
    |case| {
        let df = case.degree_in(1, case.max_degree.max(1));
        let f = case.op("f", df)?;
        let g = case.random_op("g")?;
        let i = case.degree_in(0, df - 1);
        case.note("i", i);
        let composed = partial_compose(&f, &g, i)?;
        let sign = S::from_i64(Sign::pow(i as i64 * g.reduced()).as_i64());
        match case.variance {
            Variance::Endo => {
                let args: Vec<Vec<S>> =
                    (0..composed.deg()).map(|k| case.vector(&format!("x{k}"))).collect();
                let lhs = apply(&composed, &args)?;
                let n = g.deg();
                let inner = apply(&g, &args[i..i + n])?;
                let mut outer_args: Vec<Vec<S>> = args[..i].to_vec();
                outer_args.push(inner);
                outer_args.extend_from_slice(&args[i + n..]);
                let rhs: Vec<S> = apply(&f, &outer_args)?.into_iter().map(|v| v * sign.clone()).collect();
                Ok(case.expect_vec_eq("evaluation", &lhs, &rhs))
            }
            Variance::Coendo => {
                let v = case.vector("x");
                let lhs = coapply(&composed, &v)?;
                let t = coapply(&f, &v)?;
                let rhs: Vec<S> =
                    act_on_tensor_slot(&t, f.deg(), &g, i).into_iter().map(|x| x * sign.clone()).collect();
                Ok(case.expect_vec_eq("coevaluation", &lhs, &rhs))
            }
        }
    }
);

/// Applies the coendomorphism `g` to tensor factor `slot` of `t ∈ L^{⊗modes}`,
/// decoding every multi-index explicitly.
fn act_on_tensor_slot<S: Scalar>(t: &[S], modes: usize, g: &MultiOp<S>, slot: usize) -> Vec<S> {
    let d = g.dim();
    let n = g.deg();
    let out_modes = modes + n - 1;
    let mut out = vec![S::zero(); d.pow(out_modes as u32)];
    let mut idx = vec![0usize; out_modes];
    for (flat, o) in out.iter_mut().enumerate() {
        let mut rem = flat;
        for k in (0..out_modes).rev() {
            idx[k] = rem % d;
            rem /= d;
        }
        let mut acc = S::zero();
        for c in 0..d {
            let mut src = 0;
            for (k, &b) in idx[..slot].iter().enumerate() {
                src += b * d.pow((modes - 1 - k) as u32);
            }
            src += c * d.pow((modes - 1 - slot) as u32);
            for (k, &b) in idx[slot + n..].iter().enumerate() {
                src += b * d.pow((modes - 2 - slot - k) as u32);
            }
            let g_idx = idx[slot..slot + n].iter().fold(c, |a, &b| a * d + b);
            acc.add_product(&t[src], &g.coeffs()[g_idx]);
        }
        *o = acc;
    }
    out
}

// ---------------------------------------------------------------- brace algebra

suite!(CupIsBrace, "brace.cup_tribrace", "f⌣g = (-1)^f {μ, f, g}", |case| {
    let mu = case.mu()?;
    let f = case.random_op("f")?;
    let g = case.random_op("g")?;
    let rhs = tribrace(mu.op(), &f, &g)?.signed(Sign::pow(f.deg() as i64));
    case.expect_eq("cup vs tribrace", &cup(&mu, &f, &g)?, &rhs)
});

suite!(Getzler, "brace.getzler", "(h,f,g) = {h,f,g} + (-1)^{|f||g|}{h,g,f}", |case| {
    let h = case.random_op("h")?;
    let f = case.random_op("f")?;
    let g = case.random_op("g")?;
    let mut rhs = tribrace(&h, &f, &g)?;
    rhs.add_signed(Sign::pow(f.reduced() * g.reduced()), &tribrace(&h, &g, &f)?)?;
    case.expect_eq("Getzler", &getzler_associator(&h, &f, &g)?, &rhs)
});

suite!(GerstenhaberSymmetry, "brace.gerstenhaber", "(h,f,g) = (-1)^{|f||g|}(h,g,f)", |case| {
    let h = case.random_op("h")?;
    let f = case.random_op("f")?;
    let g = case.random_op("g")?;
    let rhs = getzler_associator(&h, &g, &f)?.signed(Sign::pow(f.reduced() * g.reduced()));
    case.expect_eq("Gerstenhaber", &getzler_associator(&h, &f, &g)?, &rhs)
});

suite!(Antisymmetry, "brace.antisymmetry", "[f,g] = -(-1)^{|f||g|}[g,f]", |case| {
    let f = case.random_op("f")?;
    let g = case.random_op("g")?;
    let mut sum = bracket(&f, &g)?;
    sum.add_signed(Sign::pow(f.reduced() * g.reduced()), &bracket(&g, &f)?)?;
    Ok(case.expect_zero("antisymmetry", &sum))
});

/// Graded bracket, or the ungraded commutator when the negative-control hook is set.
fn jacobi_bracket<S: Scalar>(case: &Case<S>, f: &MultiOp<S>, g: &MultiOp<S>) -> Result<MultiOp<S>> {
    if case.corrupt_sign {
        total_compose(f, g)?.sub(&total_compose(g, f)?)
    } else {
        bracket(f, g)
    }
}

suite!(
    Jacobi,
    "brace.jacobi",
    "(-1)^{|f||h|}[[f,g],h] + (-1)^{|g||f|}[[g,h],f] + (-1)^{|h||g|}[[h,f],g] = 0",
    |case| {
        let f = case.random_op("f")?;
        let g = case.random_op("g")?;
        let h = case.random_op("h")?;
        let (fr, gr, hr) = (f.reduced(), g.reduced(), h.reduced());
        let b = |x: &MultiOp<S>, y: &MultiOp<S>| jacobi_bracket(case, x, y);
        let mut sum = b(&b(&f, &g)?, &h)?.signed(Sign::pow(fr * hr));
        sum.add_signed(Sign::pow(gr * fr), &b(&b(&g, &h)?, &f)?)?;
        sum.add_signed(Sign::pow(hr * gr), &b(&b(&h, &f)?, &g)?)?;
        Ok(case.expect_zero("jacobi", &sum))
    }
);

suite!(CupAssociator, "brace.cup_associator", "(f⌣g)⌣h - f⌣(g⌣h) = (-1)^g {μ², f, g, h}", |case| {
    let mu = case.mu()?;
    let f = case.random_op("f")?;
    let g = case.random_op("g")?;
    let h = case.random_op("h")?;
    let lhs = cup(&mu, &cup(&mu, &f, &g)?, &h)?.sub(&cup(&mu, &f, &cup(&mu, &g, &h)?)?)?;
    let rhs = tetrabrace(&mu_squared(&mu)?, &f, &g, &h)?.signed(Sign::pow(g.deg() as i64));
    case.expect_eq("cup associator", &lhs, &rhs)
});

suite!(
    RightTranslation,
    "brace.right_translation",
    "(f⌣g)•h = f⌣(g•h) + (-1)^{|h|g}(f•h)⌣g",
    |case| {
        let mu = case.mu()?;
        let f = case.random_op("f")?;
        let g = case.random_op("g")?;
        let h = case.random_op("h")?;
        let lhs = total_compose(&cup(&mu, &f, &g)?, &h)?;
        let mut rhs = cup(&mu, &f, &total_compose(&g, &h)?)?;
        rhs.add_signed(Sign::pow(h.reduced() * g.deg() as i64), &cup(&mu, &total_compose(&f, &h)?, &g)?)?;
        case.expect_eq("right translation", &lhs, &rhs)
    }
);


suite!(
    MicroAssociator,
    "brace.micro_associator",
    "μ²(x, y, z) = μ(μ(x, y), z) - μ(x, μ(y, z))",
    variances = ENDO_ONLY,
    |case| {
        let mu = case.mu()?;
        let (x, y, z) = (case.vector("x"), case.vector("y"), case.vector("z"));
        let m = |a: Vec<S>, b: Vec<S>| apply(mu.op(), &[a, b]);
        let left = m(m(x.clone(), y.clone())?, z.clone())?;
        let right = m(x.clone(), m(y.clone(), z.clone())?)?;
        let expect: Vec<S> = left.into_iter().zip(right).map(|(a, b)| a - b).collect();
        let got = apply(&mu_squared(&mu)?, &[x, y, z])?;
        Ok(case.expect_vec_eq("associator", &got, &expect))
    }
);

// ---------------------------------------------------------------- coboundary

suite!(
    CoboundaryFormulas,
    "coboundary.formulas",
    "[f, μ] = f⌣𝕀 + f•μ + (-1)^{|f|}𝕀⌣f",
    |case| {
        let ctx = CoboundaryContext::new(case.mu()?)?;
        let f = case.random_op("f")?;
        case.expect_eq("two formulas", &ctx.coboundary(&f)?, &ctx.coboundary_via_cup(&f)?)
    }
);

suite!(
    BracketDerivation,
    "coboundary.bracket_derivation",
    "∂[f,g] = (-1)^{|g|}[∂f, g] + [f, ∂g]",
    |case| {
        let ctx = CoboundaryContext::new(case.mu()?)?;
        let f = case.random_op("f")?;
        let g = case.random_op("g")?;
        let lhs = ctx.coboundary(&bracket(&f, &g)?)?;
        let mut rhs = bracket(&f, &ctx.coboundary(&g)?)?;
        rhs.add_signed(Sign::pow(g.reduced()), &bracket(&ctx.coboundary(&f)?, &g)?)?;
        case.expect_eq("derivation", &lhs, &rhs)
    }
);

suite!(
    Commutation,
    "coboundary.commutation",
    "∂_f ∂_g x - (-1)^{|f||g|} ∂_g ∂_f x = ∂_{[g,f]} x",
    |case| {
        let f = case.random_op("f")?;
        let g = case.random_op("g")?;
        let x = case.random_op("x")?;
        let d = right_adjoint_action;
        let mut lhs = d(&f, &d(&g, &x)?)?;
        lhs.add_signed(Sign::pow(f.reduced() * g.reduced()).flip(), &d(&g, &d(&f, &x)?)?)?;
        let rhs = d(&bracket(&g, &f)?, &x)?;
        case.expect_eq("commutation", &lhs, &rhs)
    }
);

suite!(SquareIsMuSquaredAction, "coboundary.square", "∂²f = [f, μ²]", |case| {
    let ctx = CoboundaryContext::new(case.mu()?)?;
    let f = case.random_op("f")?;
    case.expect_eq("square", &ctx.coboundary_square(&f)?, &ctx.square_action(&f)?)
});

suite!(
    SquareVanishes,
    "coboundary.square_associative",
    "∂²f = 0 when μ is associative",
    |case| {
        let ctx = CoboundaryContext::new(case.associative_mu()?)?;
        let f = case.random_op("f")?;
        Ok(case.expect_zero("square", &ctx.coboundary_square(&f)?))
    }
);

suite!(CupDeviation, "coboundary.cup_deviation", "∂(f⌣g) - f⌣∂g - (-1)^g ∂f⌣g = (-1)^g {μ², f, g}", |case| {
    let ctx = CoboundaryContext::new(case.mu()?)?;
    let f = case.random_op("f")?;
    let g = case.random_op("g")?;
    let rhs = tribrace(&ctx.mu_squared()?, &f, &g)?.signed(Sign::pow(g.deg() as i64));
    case.expect_eq("cup deviation", &ctx.cup_deviation(&f, &g)?, &rhs)
});

suite!(
    CupDerivation,
    "coboundary.cup_derivation_associative",
    "∂ is a derivation of ⌣ when μ is associative",
    |case| {
        let ctx = CoboundaryContext::new(case.associative_mu()?)?;
        let f = case.random_op("f")?;
        let g = case.random_op("g")?;
        Ok(case.expect_zero("cup deviation", &ctx.cup_deviation(&f, &g)?))
    }
);

suite!(
    CupCommutatorDeviation,
    "coboundary.cup_commutator_deviation",
    "(-1)^g (∂(f•g) - f•∂g - (-1)^{|g|}∂f•g) = f⌣g - (-1)^{fg} g⌣f",
    |case| {
        let ctx = CoboundaryContext::new(case.mu()?)?;
        let f = case.random_op("f")?;
        let g = case.random_op("g")?;
        let lhs = ctx.dev_total(&f, &g)?.signed(Sign::pow(g.deg() as i64));
        case.expect_eq("cup commutator", &lhs, &cup_commutator(ctx.mu(), &f, &g)?)
    }
);

suite!(
    TribraceDeviationCompose,
    "coboundary.tribrace_deviation_compose",
    "(-1)^g dev{h,f,g} = (h•f)⌣g + (-1)^{|h|f} f⌣(h•g) - h•(f⌣g)",
    |case| {
        let ctx = CoboundaryContext::new(case.mu()?)?;
        let h = case.random_op("h")?;
        let f = case.random_op("f")?;
        let g = case.random_op("g")?;
        let lhs = ctx.dev_tribrace(&h, &f, &g)?.signed(Sign::pow(g.deg() as i64));
        case.expect_eq("via total composition", &lhs, &tribrace_deviation_via_compose(ctx.mu(), &h, &f, &g)?)
    }
);

suite!(
    TribraceDeviationBracket,
    "coboundary.tribrace_deviation_bracket",
    "(-1)^g dev{h,f,g} = [h,f]⌣g + (-1)^{|h|f} f⌣[h,g] - [h, f⌣g]",
    |case| {
        let ctx = CoboundaryContext::new(case.mu()?)?;
        let h = case.random_op("h")?;
        let f = case.random_op("f")?;
        let g = case.random_op("g")?;
        let lhs = ctx.dev_tribrace(&h, &f, &g)?.signed(Sign::pow(g.deg() as i64));
        case.expect_eq("via bracket", &lhs, &tribrace_deviation_via_bracket(ctx.mu(), &h, &f, &g)?)
    }
);

// ---------------------------------------------------------------- cohomology
//
// These always compute over the rationals: the question "is this a coboundary"
// has no meaningful floating-point answer.

fn exact_complex<S: Scalar>(case: &mut Case<S>) -> Result<CochainComplex> {
    let spec = case.associative_spec()?;
    let op = MultiOp::new(case.dim, 2, case.variance, spec.mu.clone())?;
    CochainComplex::new(CoboundaryContext::new(BinaryMu::new(op)?)?)
}

/// `Verdict::Skip` unless `C^n` is small enough to solve in.
fn solvable(dim: usize, n: usize) -> bool {
    entry_count(dim, n).is_ok_and(|len| len <= SOLVE_CAP)
}

fn exact_eq(what: &str, lhs: &MultiOp<Rational>, rhs: &MultiOp<Rational>) -> Result<Verdict> {
    let diff = lhs.sub(rhs)?;
    Ok(if diff.is_zero() {
        Verdict::Pass
    } else {
        Verdict::Fail(format!("{what}: residual norm {}", diff.norm()))
    })
}

fn verified_coboundary(cx: &mut CochainComplex, what: &str, target: &MultiOp<Rational>) -> Result<Verdict> {
    match cx.preimage(target)? {
        None => Ok(Verdict::Fail(format!("{what}: not in the image of ∂"))),
        Some(pre) => exact_eq(&format!("{what} (solver preimage)"), &cx.context().coboundary(&pre)?, target),
    }
}

suite!(
    ComplexProperty,
    "cohomology.complex",
    "∂_{n+1} ∂_n = 0 for associative μ",
    max_dim = 3,
    |case| {
        let mut cx = exact_complex(case)?;
        let n = case.degree_in(0, 2);
        if !solvable(case.dim, n + 2) {
            return Ok(Verdict::Skip);
        }
        case.note("n", n);
        let a = cx.matrix(n)?.matrix.clone();
        let b = cx.matrix(n + 1)?.matrix.clone();
        let prod = b.mul(&a);
        Ok(if prod.is_zero() {
            Verdict::Pass
        } else {
            Verdict::Fail(format!("∂∂ ≠ 0 at n = {n}"))
        })
    }
);

suite!(
    CupCommutatorExact,
    "cohomology.cup_commutator_exact",
    "cocycles f, g: f⌣g - (-1)^{fg} g⌣f = ∂((-1)^g f•g)",
    max_dim = 3,
    |case| {
        let mut cx = exact_complex(case)?;
        let (df, dg) = (case.degree(), case.degree());
        if df + dg == 0 || !solvable(case.dim, df + dg) {
            return Ok(Verdict::Skip);
        }
        let f = cx.random_cocycle(df, case.rng())?;
        let g = cx.random_cocycle(dg, case.rng())?;
        case.record("f", &f);
        case.record("g", &g);
        let comm = cup_commutator(cx.context().mu(), &f, &g)?;
        let pre = total_compose(&f, &g)?.signed(Sign::pow(dg as i64));
        Ok(all([
            exact_eq("explicit preimage", &cx.context().coboundary(&pre)?, &comm)?,
            verified_coboundary(&mut cx, "cup commutator", &comm)?,
        ]))
    }
);

suite!(
    LeibnizExact,
    "cohomology.leibniz_exact",
    "cocycles h, f, g: [h, f⌣g] - [h,f]⌣g - (-1)^{|h|f} f⌣[h,g] = ∂(-(-1)^g {h,f,g})",
    max_dim = 3,
    |case| {
        let mut cx = exact_complex(case)?;
        let (dh, df, dg) = (case.degree(), case.degree(), case.degree());
        let target_deg = (dh + df + dg) as i64 - 1;
        if target_deg < 1 || !solvable(case.dim, target_deg as usize) {
            return Ok(Verdict::Skip);
        }
        let h = cx.random_cocycle(dh, case.rng())?;
        let f = cx.random_cocycle(df, case.rng())?;
        let g = cx.random_cocycle(dg, case.rng())?;
        case.record("h", &h);
        case.record("f", &f);
        case.record("g", &g);
        let leibniz = -tribrace_deviation_via_bracket(cx.context().mu(), &h, &f, &g)?;
        let pre = tribrace(&h, &f, &g)?.signed(Sign::pow(dg as i64).flip());
        Ok(all([
            exact_eq("explicit preimage", &cx.context().coboundary(&pre)?, &leibniz)?,
            verified_coboundary(&mut cx, "Leibniz deviation", &leibniz)?,
        ]))
    }
);

suite!(
    DegreeBookkeeping,
    "cohomology.degrees",
    "deg(f⌣g) = f + g and deg[f,g] = f + g - 1",
    |case| {
        let mu = case.mu()?;
        let f = case.random_op("f")?;
        let g = case.random_op("g")?;
        let (df, dg) = (f.deg(), g.deg());
        let c = cup(&mu, &f, &g)?.deg();
        let b = if df + dg == 0 { None } else { Some(bracket(&f, &g)?.deg()) };
        Ok(match b {
            _ if c != df + dg => Verdict::Fail(format!("deg cup = {c}")),
            Some(b) if b != df + dg - 1 => Verdict::Fail(format!("deg bracket = {b}")),
            _ => Verdict::Pass,
        })
    }
);
