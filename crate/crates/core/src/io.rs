//! JSON files for algebras, Lie algebras, bimodules, connections and operators.
//! Scalars are integers or strings such as `"1/2"`, `"-3"`, `"2/3+1/2i"`.
//! Sparse entries are `[.., re, im]` with 0-based indices.

use serde_json::{json, Value};

use crate::algebra::{check_algebra, check_lie, Bimodule, FiniteAlgebra, LieAlgebraData};
use crate::error::{NcError, Result};
use crate::linalg::{Matrix, Rational, Scalar, SparseVec};

fn field<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    v.get(key).filter(|x| !x.is_null())
}

fn required<'a>(v: &'a Value, key: &str, what: &str) -> Result<&'a Value> {
    field(v, key).ok_or_else(|| NcError::input(format!("{key} required in {what}")))
}

fn as_usize(v: &Value, key: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| NcError::input(format!("{key} must be a non-negative integer")))
}

pub fn parse_rational(v: &Value) -> Result<Rational> {
    let bad = || NcError::input(format!("malformed rational {v}"));
    match v {
        Value::Number(n) => n.as_i64().map(|x| Rational::new(x, 1)).ok_or_else(bad),
        Value::String(s) => s.parse().map_err(|_| bad()),
        _ => Err(bad()),
    }
}

pub fn parse_scalar(v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => s.parse().map_err(|_| NcError::input(format!("malformed scalar {v}"))),
        _ => Ok(Scalar::real(parse_rational(v)?)),
    }
}

/// `[i_1, .., i_k, re, im]` rows with every index below `bounds[j]`.
fn sparse_entries(v: &Value, bounds: &[usize], key: &str) -> Result<Vec<(Vec<usize>, Scalar)>> {
    let rows = v.as_array().ok_or_else(|| NcError::input(format!("{key} must be an array")))?;
    let k = bounds.len();
    rows.iter()
        .map(|row| {
            let r = row.as_array().filter(|r| r.len() == k + 2).ok_or_else(|| {
                NcError::input(format!("{key} entries need {} indices and re, im", k))
            })?;
            let idx = r[..k]
                .iter()
                .zip(bounds)
                .map(|(x, &b)| {
                    let i = as_usize(x, key)?;
                    if i >= b {
                        return Err(NcError::input(format!("{key} index {i} out of range (< {b})")));
                    }
                    Ok(i)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((idx, Scalar::new(parse_rational(&r[k])?, parse_rational(&r[k + 1])?)))
        })
        .collect()
}

fn labels(v: &Value, dim: usize, prefix: &str) -> Result<Vec<String>> {
    match field(v, "basis") {
        None => Ok((0..dim).map(|i| format!("{prefix}{i}")).collect()),
        Some(b) => {
            let names: Vec<String> =
                b.as_array().into_iter().flatten().filter_map(|x| x.as_str().map(str::to_string)).collect();
            if names.len() != dim {
                return Err(NcError::input(format!("basis needs {dim} names")));
            }
            Ok(names)
        }
    }
}

fn table(entries: Vec<(Vec<usize>, Scalar)>, dim: usize) -> Vec<SparseVec> {
    let mut acc: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); dim * dim];
    for (idx, s) in entries {
        acc[idx[0] * dim + idx[1]].push((idx[2], s));
    }
    acc.into_iter().map(SparseVec::from_entries).collect()
}

fn matrices(entries: Vec<(Vec<usize>, Scalar)>, count: usize, rows: usize, cols: usize) -> Vec<Matrix> {
    let mut acc: Vec<Vec<(usize, usize, Scalar)>> = vec![Vec::new(); count];
    for (idx, s) in entries {
        acc[idx[0]].push((idx[1], idx[2], s));
    }
    acc.into_iter().map(|t| Matrix::from_triplets(rows, cols, t)).collect()
}

/// Reads an algebra without checking its axioms.
pub fn parse_algebra(v: &Value) -> Result<FiniteAlgebra> {
    let dim = as_usize(required(v, "dim", "algebra file")?, "dim")?;
    if dim == 0 {
        return Err(NcError::input("algebra dimension must be positive"));
    }
    let mul = table(sparse_entries(required(v, "mul", "algebra file")?, &[dim, dim, dim], "mul")?, dim);
    let unit = match field(v, "unit") {
        None => None,
        Some(u) => {
            let u = u.as_array().filter(|u| u.len() == dim).ok_or_else(|| NcError::input(format!("unit needs {dim} scalars")))?;
            Some(SparseVec::from_dense(&u.iter().map(parse_scalar).collect::<Result<Vec<_>>>()?))
        }
    };
    let star = match field(v, "star") {
        None => None,
        Some(s) => {
            let e = sparse_entries(s, &[dim, dim], "star")?;
            Some(Matrix::from_triplets(dim, dim, e.into_iter().map(|(i, x)| (i[0], i[1], x)).collect()))
        }
    };
    FiniteAlgebra::new(dim, labels(v, dim, "e")?, mul, unit, star)
}

/// Reads an algebra, requiring a unit and every axiom.
pub fn load_algebra(v: &Value) -> Result<FiniteAlgebra> {
    if field(v, "unit").is_none() {
        return Err(NcError::input("unit required"));
    }
    let a = parse_algebra(v)?;
    let r = check_algebra(&a);
    let axiom = if !r.associative || !r.d_squared_zero {
        Some("associativity")
    } else if r.unit_ok == Some(false) {
        Some("unit")
    } else if r.star_ok == Some(false) {
        Some("involution")
    } else {
        None
    };
    match axiom {
        Some(name) => Err(NcError::input(format!("{name}: {}", r.failures.join("; ")))),
        None => Ok(a),
    }
}

pub fn parse_lie(v: &Value) -> Result<LieAlgebraData> {
    let dim = as_usize(required(v, "dim", "Lie algebra file")?, "dim")?;
    if dim == 0 {
        return Err(NcError::input("Lie algebra dimension must be positive"));
    }
    let bracket = table(sparse_entries(required(v, "bracket", "Lie algebra file")?, &[dim, dim, dim], "bracket")?, dim);
    LieAlgebraData::new(dim, labels(v, dim, "X")?, bracket)
}

pub fn load_lie(v: &Value) -> Result<LieAlgebraData> {
    let g = parse_lie(v)?;
    let r = check_lie(&g);
    let axiom = if !r.antisymmetric {
        Some("antisymmetry")
    } else if !r.jacobi || !r.d_squared_zero {
        Some("jacobi")
    } else {
        None
    };
    match axiom {
        Some(name) => Err(NcError::input(format!("{name}: {}", r.failures.join("; ")))),
        None => Ok(g),
    }
}

/// Reads an `(A, B)`-bimodule and checks it against `a` and `b`.
pub fn load_bimodule(v: &Value, a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Bimodule> {
    let dim = as_usize(required(v, "dim", "bimodule file")?, "dim")?;
    let left = matrices(sparse_entries(required(v, "left", "bimodule file")?, &[a.dim(), dim, dim], "left")?, a.dim(), dim, dim);
    let right =
        matrices(sparse_entries(required(v, "right", "bimodule file")?, &[b.dim(), dim, dim], "right")?, b.dim(), dim, dim);
    let m = Bimodule::new(dim, left, right)?;
    let fails = m.check(Some(a), Some(b));
    if !fails.is_empty() {
        return Err(NcError::input(format!("bimodule axioms: {}", fails.join("; "))));
    }
    Ok(m)
}

/// `{"K":K, "n":n, "A":[[k,i,j,re,im],..]}` with `n^2 - 1` matrices `A_k`.
pub fn load_connection(v: &Value) -> Result<(usize, usize, Vec<Matrix>)> {
    let k = as_usize(required(v, "K", "connection file")?, "K")?;
    let n = as_usize(required(v, "n", "connection file")?, "n")?;
    if k == 0 || n < 2 {
        return Err(NcError::input("need K >= 1 and n >= 2"));
    }
    let count = n * n - 1;
    let a = matrices(sparse_entries(required(v, "A", "connection file")?, &[count, k, k], "A")?, count, k, k);
    Ok((k, n, a))
}

/// `{"rows":r, "cols":c, "entries":[[i,j,re,im],..]}`.
pub fn load_matrix(v: &Value) -> Result<Matrix> {
    let rows = as_usize(required(v, "rows", "matrix file")?, "rows")?;
    let cols = as_usize(required(v, "cols", "matrix file")?, "cols")?;
    let e = sparse_entries(required(v, "entries", "matrix file")?, &[rows, cols], "entries")?;
    Ok(Matrix::from_triplets(rows, cols, e.into_iter().map(|(i, x)| (i[0], i[1], x)).collect()))
}

fn scalar_pair(s: &Scalar) -> [Value; 2] {
    [Value::String(s.re.to_string()), Value::String(s.im.to_string())]
}

fn triple_rows(t: &[SparseVec], dim: usize) -> Vec<Value> {
    let mut rows = Vec::new();
    for (idx, v) in t.iter().enumerate() {
        for (k, s) in v.iter() {
            let [re, im] = scalar_pair(s);
            rows.push(json!([idx / dim, idx % dim, k, re, im]));
        }
    }
    rows
}

pub fn algebra_to_json(a: &FiniteAlgebra) -> Value {
    let d = a.dim();
    let mul: Vec<SparseVec> = (0..d * d).map(|k| a.basis_product(k / d, k % d).clone()).collect();
    let mut out = json!({ "dim": d, "basis": a.labels(), "mul": triple_rows(&mul, d) });
    if let Some(u) = a.unit() {
        out["unit"] = Value::Array(u.to_dense(d).iter().map(|s| Value::String(s.to_string())).collect());
    }
    if let Some(s) = a.star_matrix() {
        let rows: Vec<Value> = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let x = s.get(i, j);
                (!x.is_zero()).then(|| {
                    let [re, im] = scalar_pair(&x);
                    json!([i, j, re, im])
                })
            })
            .collect();
        out["star"] = Value::Array(rows);
    }
    out
}

pub fn lie_to_json(g: &LieAlgebraData) -> Value {
    let d = g.dim();
    let br: Vec<SparseVec> = (0..d * d).map(|k| g.basis_bracket(k / d, k % d).clone()).collect();
    json!({ "dim": d, "basis": g.labels(), "bracket": triple_rows(&br, d) })
}

fn action_rows(ms: &[Matrix]) -> Vec<Value> {
    let mut rows = Vec::new();
    for (a, m) in ms.iter().enumerate() {
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let x = m.get(i, j);
                if !x.is_zero() {
                    let [re, im] = scalar_pair(&x);
                    rows.push(json!([a, i, j, re, im]));
                }
            }
        }
    }
    rows
}

pub fn bimodule_to_json(m: &Bimodule) -> Value {
    json!({ "dim": m.dim(), "left": action_rows(m.left_actions()), "right": action_rows(m.right_actions()) })
}

pub fn connection_to_json(n: usize, a: &[Matrix]) -> Value {
    json!({ "K": a.first().map_or(0, Matrix::nrows), "n": n, "A": action_rows(a) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::finite::matrix_algebra;
    use crate::algebra::lie::sl2;
    use crate::connections::flat_representative;

    #[test]
    fn scalars() {
        assert_eq!(parse_scalar(&json!(3)).unwrap(), Scalar::int(3));
        assert_eq!(parse_scalar(&json!("-1/2")).unwrap(), Scalar::frac(-1, 2));
        assert_eq!(parse_scalar(&json!("1/2-3i")).unwrap(), Scalar::new(Rational::new(1, 2), Rational::new(-3, 1)));
        assert!(parse_rational(&json!(0.5)).unwrap_err().is_input());
        assert!(parse_rational(&json!("1/0")).is_err());
        assert!(parse_rational(&json!("x")).unwrap_err().to_string().contains("malformed rational"));
    }

    #[test]
    fn algebra_round_trip() {
        let a = matrix_algebra(2).unwrap();
        let v = algebra_to_json(&a);
        assert_eq!(load_algebra(&v).unwrap(), a);
        assert_eq!(load_algebra(&serde_json::from_str(&v.to_string()).unwrap()).unwrap(), a);
    }

    #[test]
    fn load_errors_name_the_axiom() {
        let mut v = algebra_to_json(&matrix_algebra(2).unwrap());
        v["mul"][0][3] = json!("2");
        assert!(load_algebra(&v).unwrap_err().to_string().contains("associativity"));
        let mut v = algebra_to_json(&matrix_algebra(2).unwrap());
        v.as_object_mut().unwrap().remove("unit");
        assert!(load_algebra(&v).unwrap_err().to_string().contains("unit required"));
        let mut v = algebra_to_json(&matrix_algebra(2).unwrap());
        v["mul"][0][2] = json!(9);
        assert!(load_algebra(&v).unwrap_err().to_string().contains("out of range"));
    }

    #[test]
    fn lie_round_trip_and_jacobi() {
        let g = sl2();
        let v = lie_to_json(&g);
        assert_eq!(load_lie(&v).unwrap(), g);
        let mut bad = v.clone();
        bad["bracket"][0][3] = json!(5);
        assert!(load_lie(&bad).is_err());
    }

    #[test]
    fn bimodule_and_connection() {
        let a = matrix_algebra(2).unwrap();
        let m = Bimodule::regular(&a);
        assert_eq!(load_bimodule(&bimodule_to_json(&m), &a, &a).unwrap(), m);
        let mut bad = bimodule_to_json(&m);
        bad["left"][0][3] = json!(3);
        assert!(load_bimodule(&bad, &a, &a).unwrap_err().to_string().contains("bimodule axioms"));
        let rep = flat_representative(&[2, 1], &Scalar::int(-2));
        let (k, n, back) = load_connection(&connection_to_json(2, &rep)).unwrap();
        assert_eq!((k, n, back), (3, 2, rep));
    }
}
