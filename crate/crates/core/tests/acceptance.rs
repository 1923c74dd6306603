//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nc_core::algebra::finite::{invert, matrix_algebra, truncated_poly};
use nc_core::algebra::lie::{gl, sl2};
use nc_core::algebra::{check_algebra, check_lie, Bimodule, FiniteAlgebra, LieAlgebraData};
use nc_core::calculi::{a_dual, diagram_check, kahler_check, omega_u, omega_z, DerCalculus};
use nc_core::complex::{check_gda, kunneth_gda, verify_homotopy, verify_operation};
use nc_core::connections::symbols::random_invertible;
use nc_core::connections::{
    degree_bimodule, first_order_symbols, flat_classify, random_bimodule, random_first_order, random_non_first_order,
    SmallAlgebra, Symplectic,
};
use nc_core::hochschild::{basic_cohomology, cochain_algebra, cochain_homotopy, hochschild_cohomology};
use nc_core::lie_weil::{ce_complex, exterior_algebra, invariant_polynomials, weil_basic_cohomology, weil_build, LieModule};
use nc_core::linalg::{Scalar, SparseVec};
use nc_core::ym::{flow_many, gradient_fd_error, FloatConnection, FlowConfig, YmModel};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, format!("took {:.1?}, limit {limit:?}", start.elapsed()))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn small_entry(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::gaussian(rng.gen_range(-2..=2), rng.gen_range(-1..=1))
}

/// Random tables: structure constants of known algebras in a random basis, half of them
/// with one entry changed (antisymmetrically for brackets).
fn axioms_match_d_squared() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let algebras = [matrix_algebra(2).map_err(err)?, truncated_poly(3).map_err(err)?];
    let lies = [sl2(), gl(2).map_err(err)?];
    let (mut disagreements, mut broken, mut total) = (0, 0, 0);
    for t in 0..100 {
        let base = &algebras[t % 2];
        let d = base.dim();
        let p = random_invertible(&mut rng, d);
        let a = base.change_basis(&p, base.labels().to_vec()).map_err(err)?;
        let a = if t >= 50 {
            let (i, j, k) = (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d));
            let bump = SparseVec::unit(k).scale(&Scalar::int(1 + rng.gen_range(0..3)));
            FiniteAlgebra::from_fn(d, |x, y| {
                let v = a.basis_product(x, y).clone();
                if (x, y) == (i, j) {
                    v.add(&bump)
                } else {
                    v
                }
            })
        } else {
            a
        };
        let r = check_algebra(&a);
        disagreements += usize::from(r.associative != r.d_squared_zero);
        broken += usize::from(!r.associative);
        total += 1;
    }
    for t in 0..100 {
        let base = &lies[t % 2];
        let d = base.dim();
        let p = random_invertible(&mut rng, d);
        let pinv = invert(&p).ok_or("singular basis change")?;
        let cols = p.cols_vec();
        let (i, j, k) = (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d));
        let bump = if t >= 50 && i != j { Some(SparseVec::unit(k).scale(&small_entry(&mut rng))) } else { None };
        let g = LieAlgebraData::from_fn(d, |x, y| {
            let v = pinv.apply(&base.bracket(&cols[x], &cols[y]));
            match &bump {
                Some(b) if (x, y) == (i, j) => v.add(b),
                Some(b) if (x, y) == (j, i) => v.sub(b),
                _ => v,
            }
        });
        let r = check_lie(&g);
        disagreements += usize::from(r.jacobi != r.d_squared_zero);
        broken += usize::from(!r.jacobi);
        total += 1;
    }
    ensure(disagreements == 0, format!("{disagreements} disagreements"))?;
    within(start, Duration::from_secs(30))?;
    Ok(format!("{total} tables, {broken} failing the axioms, 0 disagreements"))
}

fn hochschild_m2() -> Check {
    let start = Instant::now();
    let a = matrix_algebra(2).map_err(err)?;
    let r = hochschild_cohomology(&a, &Bimodule::regular(&a), 3).map_err(err)?;
    ensure(r.dims == [1, 0, 0, 0] && !r.truncated, format!("dims {:?}", r.dims))?;
    ensure(r.normalized_dims == r.dims, format!("normalized {:?}", r.normalized_dims))?;
    within(start, Duration::from_secs(60))?;
    Ok(format!("dims {:?}, normalized {:?}", r.dims, r.normalized_dims))
}

fn homotopies() -> Check {
    let start = Instant::now();
    for a in [matrix_algebra(2).map_err(err)?, truncated_poly(2).map_err(err)?] {
        let g = cochain_algebra(&a, 5).map_err(err)?;
        let h = cochain_homotopy(&a, 5).map_err(err)?;
        verify_homotopy(&g.as_complex(), &h, 1..=4).map_err(err)?;
        omega_u(&a, 4).map_err(err)?.verify_homotopy(4).map_err(err)?;
    }
    within(start, Duration::from_secs(60))?;
    Ok("dh + hd = id on C^1..C^4 and kd + dk = id on Omega^1_u..Omega^4_u for M_2, C[x]/(x^2)".into())
}

fn chevalley_eilenberg() -> Check {
    let g = sl2();
    let h = ce_complex(&g, &LieModule::trivial(&g), 3).map_err(err)?.cohomology().map_err(err)?;
    ensure(h.dims == [1, 0, 0, 1], format!("H(sl2) = {:?}", h.dims))?;
    let ext = exterior_algebra(&g).map_err(err)?;
    let k = kunneth_gda(&ext, &ext, 4).map_err(err)?;
    ensure(k == [1, 0, 0, 2, 0], format!("Kunneth dims {k:?}"))?;
    Ok(format!("H(sl2) = {:?}, H(Lambda (x) Lambda) = {k:?} through degree 4", h.dims))
}

fn basic_m2() -> Check {
    let start = Instant::now();
    let a = matrix_algebra(2).map_err(err)?;
    let h = basic_cohomology(&a, 4).map_err(err)?;
    let g = gl(2).map_err(err)?;
    let oracle: Vec<usize> = (0..=4).map(|k| if k % 2 == 0 { invariant_polynomials(&g, k / 2).dim() } else { 0 }).collect();
    ensure(h.dims == [1, 0, 1, 0, 2] && !h.truncated, format!("H_B = {:?}", h.dims))?;
    ensure(h.dims == oracle, format!("invariant polynomials give {oracle:?}"))?;
    within(start, Duration::from_secs(600))?;
    Ok(format!("H_B(M_2) = {:?}, invariant polynomials of gl(2) {:?}", h.dims, oracle))
}

fn weil_sl2() -> Check {
    let g = sl2();
    let (w, op) = weil_build(&g, 5).map_err(err)?;
    let gr = check_gda(&w.gda);
    ensure(gr.ok(), format!("check_gda: {:?}", gr.failures))?;
    let or = verify_operation(&w.gda, &op);
    ensure(or.ok(), format!("operation: {:?}", or.failures))?;
    let h = w.gda.as_complex().cohomology().map_err(err)?;
    ensure(h.dims[0] == 1 && h.dims[1..=4].iter().all(|&x| x == 0), format!("H(W) = {:?}", h.dims))?;
    let b = weil_basic_cohomology(&g, 4).map_err(err)?;
    ensure(b.dims == [1, 0, 0, 0, 1] && b.matches(), format!("H_B(W) = {:?}", b.dims))?;
    Ok(format!("W(sl2) through degree 5 valid, H(W) = {:?}, H_B = {:?}", &h.dims[..5], b.dims))
}

fn calculi() -> Check {
    let m2 = matrix_algebra(2).map_err(err)?;
    let u = omega_u(&m2, 3).map_err(err)?;
    let want: Vec<usize> = (0..=3).map(|n| 4 * 3usize.pow(n)).collect();
    ensure(u.dims()[..=3] == want[..], format!("Omega_u(M_2) dims {:?}", u.dims()))?;
    let diagram = diagram_check(&m2, 2).map_err(err)?;
    ensure(diagram.ok(), format!("diagram: {:?}", diagram.failures))?;
    ensure(diagram.dims_z == diagram.dims_u && diagram.dims_diag == diagram.dims_u, "Omega_u, Omega_Z, Omega_Diag differ")?;
    let z = omega_z(&m2, 2).map_err(err)?;
    ensure((0..=2).all(|n| z.killed(n).dim() == 0), "I_Z(M_2) is nonzero")?;
    let x3 = truncated_poly(3).map_err(err)?;
    let zx = omega_z(&x3, 2).map_err(err)?;
    ensure(zx.dims()[1] == 2, format!("Omega^1_Z(C[x]/(x^3)) = {}", zx.dims()[1]))?;
    let k = kahler_check(&x3, 2).map_err(err)?;
    ensure(k.ok, format!("kahler {k:?}"))?;
    let der = DerCalculus::new(&m2, 2).map_err(err)?;
    let one_forms = der.dims()[1];
    let cochains = der.derivations().len() * m2.dim();
    ensure(one_forms == 12 && cochains == 12, format!("Omega^1_Der = {one_forms}, cochains {cochains}"))?;
    let dual = a_dual(&m2, &degree_bimodule(der.gda(), 1).map_err(err)?).homs.dim();
    ensure(dual == 3, format!("A-dual of Omega^1_Der has dim {dual}"))?;
    Ok(format!("Omega_u(M_2) {:?}, Omega^1_Z(C[x]/(x^3)) = 2, {one_forms} = {cochains}, dual dim {dual}", want))
}

fn symplectic() -> Check {
    for n in [2, 3] {
        let s = Symplectic::new(n).map_err(err)?;
        let r = s.report().map_err(err)?;
        ensure(r.ok(), format!("n = {n}: {:?}", r.failures))?;
        ensure(r.closed && r.nondegenerate && r.exact && r.poisson_is_commutator && r.ham_lie_hom, format!("n = {n}: {r:?}"))?;
        ensure(s.poisson_identity_check(50, n as u64).map_err(err)?, format!("n = {n}: Poisson identity fails"))?;
    }
    Ok("n = 2, 3: closed, nondegenerate, exact, {x,y} = i[x,y], Ham a Lie map, 50 quadruples".into())
}

fn first_order() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let kinds = [SmallAlgebra::M2, SmallAlgebra::DualNumbers];
    let (mut good, mut bad, mut attempts) = (0, 0, 0);
    while (good < 50 || bad < 50) && attempts < 10_000 {
        attempts += 1;
        let (ka, kb) = (kinds[rng.gen_range(0..2)], kinds[rng.gen_range(0..2)]);
        let m = random_bimodule(&mut rng, ka, kb).map_err(err)?;
        let n = random_bimodule(&mut rng, ka, kb).map_err(err)?;
        let (a, b) = (ka.algebra(), kb.algebra());
        if good < 50 {
            if let Some(d) = random_first_order(&mut rng, &m, &n) {
                let r = first_order_symbols(&a, &b, &m, &n, &d).map_err(err)?;
                ensure(r.is_first_order && r.residual_zero && r.sigma_bimodule_maps, format!("operator {good}: {r:?}"))?;
                good += 1;
            }
        }
        if bad < 50 {
            if let Some(d) = random_non_first_order(&mut rng, &m, &n) {
                let r = first_order_symbols(&a, &b, &m, &n, &d).map_err(err)?;
                ensure(!r.is_first_order, format!("non-first-order map {bad} accepted"))?;
                bad += 1;
            }
        }
    }
    ensure(good == 50 && bad == 50, format!("only {good} and {bad} operators generated"))?;
    Ok("50 first-order operators with zero residual, 50 other maps rejected".into())
}

fn flat() -> Check {
    let mut counts = Vec::new();
    for k in 1..=4 {
        let r = flat_classify(2, k, None, true).map_err(err)?;
        ensure(r.ok(), format!("K = {k}: {r:?}"))?;
        counts.push(r.classes.len());
    }
    ensure(counts == [1, 2, 3, 5], format!("classes {counts:?}"))?;
    Ok(format!("classes {counts:?}, all exactly flat, labels distinct"))
}

fn ym_flow() -> Check {
    let start = Instant::now();
    let model = YmModel::pauli().map_err(err)?;
    let cfg = FlowConfig::new(3);
    let seeds: Vec<u64> = (0..20).collect();
    let census = flow_many(&model, &cfg, &seeds);
    for r in &census.runs {
        if r.grad_norm < 1e-9 {
            ensure(r.flat_residual < 1e-6 && r.class_label.is_resolved(), format!("seed {}: {r:?}", r.seed))?;
        }
    }
    ensure(census.distinct_classes >= 2, format!("census {:?}", census.census))?;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let worst = (0..20)
        .map(|_| gradient_fd_error(&model, &FloatConnection::random(&mut rng, 3, model.dim, 1.0), 1e-5))
        .fold(0.0, f64::max);
    ensure(worst < 1e-6, format!("finite-difference error {worst:e}"))?;
    within(start, Duration::from_secs(120))?;
    Ok(format!("census {:?}, max finite-difference error {worst:.1e}", census.census))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("axioms versus d^2 = 0", axioms_match_d_squared),
        ("Hochschild of M_2", hochschild_m2),
        ("triviality homotopies", homotopies),
        ("Chevalley-Eilenberg", chevalley_eilenberg),
        ("basic cohomology of M_2", basic_m2),
        ("Weil algebra", weil_sl2),
        ("calculi", calculi),
        ("symplectic structure", symplectic),
        ("first-order symbols", first_order),
        ("flat classification", flat),
        ("Yang-Mills flow", ym_flow),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1} s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1} s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
