//! `btorsion spectral`.

use bilinear_torsion::circle::{
    build_conjugated, bz_compare, exact_spectrum_circle, gelfand_yaglom_det, rs_torsion, small_band_transport,
    small_spectrum_dims, witten_deform, zeta_det_exact, CircleModel, RsMethod, Stencil,
};
use bilinear_torsion::io::{from_json, CircleFile};
use bilinear_torsion::numkernel::eigenvalues;
use bilinear_torsion::{Error, C64};
use clap::ValueEnum;

use crate::output::{format_complex, Row};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Spectrum,
    Zetadet,
    Rstorsion,
    Witten,
    /// Small-band transport ratio against Milnor torsion.
    #[value(name = "thm33")]
    Transport,
    Bz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Gy,
    Discrete,
}

pub struct Args {
    pub op: Op,
    pub grid: Option<usize>,
    pub t: Option<f64>,
    pub cut: Option<f64>,
    pub method: Option<Method>,
}

const DEFAULT_GRID: usize = 256;
const SHOWN_EIGENVALUES: usize = 8;

fn lambda_param(m: &CircleModel) -> String {
    m.holonomies().iter().map(|z| format_complex(*z).replace(' ', "")).collect::<Vec<_>>().join(",")
}

fn deformed(model: &CircleModel, t: f64) -> bilinear_torsion::Result<CircleModel> {
    if t == 0.0 {
        Ok(model.clone())
    } else {
        witten_deform(model, t)
    }
}

pub fn run(text: &str, args: &Args) -> anyhow::Result<Vec<Row>> {
    let file: CircleFile = from_json(text)?;
    let model = file.model()?;
    let n = args.grid.or(file.n).unwrap_or(DEFAULT_GRID);
    let t = args.t.or(file.t).unwrap_or(0.0);
    let lam = lambda_param(&model);
    let rows = match args.op {
        Op::Spectrum => {
            let mut rows = Vec::new();
            let m = deformed(&model, t)?;
            for k in 0..m.rank() {
                let ops = build_conjugated(&m.component(k), n, Stencil::Exponential)?;
                for (degree, lap) in [&ops.lap0, &ops.lap1].into_iter().enumerate() {
                    let mut ev = eigenvalues(lap)?;
                    ev.sort_by(|a, b| {
                        a.norm().total_cmp(&b.norm()).then(a.re.total_cmp(&b.re)).then(a.im.total_cmp(&b.im))
                    });
                    for (j, z) in ev.iter().take(SHOWN_EIGENVALUES).enumerate() {
                        println!("summand {k} degree {degree} #{j}: {}", format_complex(*z));
                        rows.push(
                            Row::new("spectrum", *z)
                                .param("summand", k)
                                .param("degree", degree)
                                .param("k", j)
                                .param("N", n)
                                .param("T", t),
                        );
                    }
                }
                if model.is_canonical() {
                    let spec = exact_spectrum_circle(model.holonomies()[k], model.length())?;
                    for j in -2..=2 {
                        rows.push(Row::new("spectrum-exact", spec.eigenvalue(j)).param("summand", k).param("n", j));
                    }
                }
            }
            rows
        }
        Op::Zetadet => {
            let mut rows = Vec::new();
            for degree in 0..2 {
                let value = if model.is_canonical() {
                    let mut d = C64::new(1.0, 0.0);
                    for &h in model.holonomies() {
                        d *= zeta_det_exact(h, model.length(), degree)?;
                    }
                    d
                } else {
                    gelfand_yaglom_det(&model, degree)?
                };
                println!("degree {degree}: {}", format_complex(value));
                rows.push(Row::new("zetadet", value).param("lambda", &lam).param("degree", degree));
            }
            rows
        }
        Op::Rstorsion => {
            let m = deformed(&model, t)?;
            let method = match args.method {
                Some(Method::Exact) => RsMethod::Exact,
                Some(Method::Gy) => RsMethod::GelfandYaglom,
                Some(Method::Discrete) => RsMethod::Discrete { coarse: n },
                None if m.is_canonical() => RsMethod::Exact,
                None => RsMethod::GelfandYaglom,
            };
            let a = args.cut.unwrap_or(if m.is_acyclic() { 0.0 } else { 0.5 });
            let value = rs_torsion(&m, a, method)?;
            println!("{}", format_complex(value));
            vec![Row::new("rstorsion", value)
                .param("lambda", &lam)
                .param("cut", a)
                .param("method", format!("{method:?}"))]
        }
        Op::Witten => {
            let s = small_spectrum_dims(&model, t, n, 1.0)?;
            println!("T = {t}: counts {:?}, small max {:.3e}, large min {:.4}", s.counts, s.small_max, s.large_min);
            let mut rows = Vec::new();
            for degree in 0..2 {
                rows.push(
                    Row::new("witten-count", C64::new(s.counts[degree] as f64, 0.0))
                        .param("degree", degree)
                        .param("T", t)
                        .param("N", n),
                );
                rows.push(
                    Row::new("witten-trace", s.trace[degree]).param("degree", degree).param("T", t).param("N", n),
                );
            }
            rows.push(Row::new("witten-small-max", C64::new(s.small_max, 0.0)).param("T", t).param("N", n));
            rows.push(Row::new("witten-large-min", C64::new(s.large_min, 0.0)).param("T", t).param("N", n));
            rows
        }
        Op::Transport => {
            let tlist = if t > 0.0 { vec![t] } else { vec![4.0, 10.0] };
            let rows = small_band_transport(&model, &tlist, n)?;
            rows.iter()
                .map(|r| {
                    println!("T = {}: ratio {}, |log| {:.4e}", r.t, format_complex(r.ratio), r.log_abs);
                    Row::new("small-band-transport", r.ratio).param("lambda", &lam).param("T", r.t).param("N", n)
                })
                .collect()
        }
        Op::Bz => {
            let tol = 1e-8;
            let r = bz_compare(&model)?;
            let pass = (r - C64::new(1.0, 0.0)).norm() <= tol;
            println!("{}", format_complex(r));
            vec![Row::new("bz", r).param("lambda", &lam).checked(tol, pass)]
        }
    };
    if rows.is_empty() {
        return Err(Error::Model("nothing to report".into()).into());
    }
    Ok(rows)
}
