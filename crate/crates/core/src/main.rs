//! Batch front end. Every command prints a machine-readable report to
//! stdout; identical invocations (including the seed) produce byte-identical
//! output. Exit codes: 0 success, 2 usage or parse error, 3 resource
//! ceiling, 4 internal invariant violation.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use mpstab::chevalley::structure_constants;
use mpstab::error::Error;
use mpstab::g2case;
use mpstab::mpgrading;
use mpstab::ring::{IntRing, Ring};
use mpstab::rng::XorShift64Star;
use mpstab::rootdata::{build_root_system, rho_over, ApartmentPoint, Rat, RootDatum, RootSystemType};
use mpstab::stability;
use mpstab::stability::cone::chamber_cocharacters;
use mpstab::stability::field::Fq;
use mpstab::stability::{Cocharacter, WeightedVector};
use mpstab::weyl;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Parser)]
#[command(name = "mpstab", disable_help_subcommand = true)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// worker count for the parallel scans; output does not depend on it
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long = "type")]
    ty: String,
    /// use the point x0 + rho-check / M
    #[arg(long, value_name = "M")]
    rho_over: Option<i64>,
    /// exact rational coordinates in the simple-coroot basis, e.g. "1/2,0"
    #[arg(long, value_name = "COORDS")]
    point: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Root datum report for a simple type
    Roots {
        #[arg(long = "type")]
        ty: String,
    },
    /// Orders of elliptic Z-regular Weyl elements
    RegularOrders {
        #[arg(long = "type")]
        ty: String,
        #[arg(long, default_value_t = weyl::DEFAULT_CEILING)]
        ceiling: u64,
    },
    /// Filtration quotient, Z/m-grading, and the order-criterion verdict
    Grading {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = weyl::DEFAULT_CEILING)]
        ceiling: u64,
    },
    /// The rank-two discriminant example
    G2 {
        #[command(subcommand)]
        sub: G2Command,
    },
    /// Per-vector stability evidence for the graded piece at a point
    Hm {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 2)]
        q: u16,
        /// maximum extension degree for the destabilizer schedule
        #[arg(long, default_value_t = 2)]
        ext_degree: u32,
        /// cap on group elements per scan
        #[arg(long, default_value_t = 200_000)]
        budget: usize,
        /// cap on the number of vectors enumerated
        #[arg(long, default_value_t = 200_000)]
        ceiling: usize,
    },
}

#[derive(Subcommand)]
enum G2Command {
    /// Delta, H6, G6 of one integer vector
    Delta {
        /// eight integers a,b,c,d,e,f,g,h
        #[arg(long, default_value = "0,0,0,0,0,0,0,0")]
        coeffs: String,
    },
    /// Exhaustive stable-vector classification over F_q
    Classify {
        #[arg(long, default_value_t = 2)]
        q: u16,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Seeded check of Delta = H6^3 G6 on random integer tuples
    Identity {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::GroupTooLarge { .. } | Error::BudgetExhausted => 3,
        Error::IntegralityViolation(_)
        | Error::DivisibilityViolation(_)
        | Error::Internal(_) => 4,
        _ => 2,
    }
}

fn parse_type(s: &str) -> Result<RootSystemType, Error> {
    s.parse::<RootSystemType>()
}

fn parse_rat(s: &str) -> Result<Rat, Error> {
    let bad = || Error::Internal(format!("cannot parse rational '{s}'"));
    let bad2 = |_| Error::Internal(format!("cannot parse rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(bad2)?;
            let d: i64 = d.trim().parse().map_err(bad2)?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.trim().parse().map_err(bad2)?)),
    }
}

fn resolve_point(datum: &RootDatum, args: &PointArgs) -> Result<ApartmentPoint, Error> {
    match (&args.rho_over, &args.point) {
        (Some(m), None) => {
            if *m <= 0 {
                return Err(Error::Internal("--rho-over must be positive".into()));
            }
            Ok(rho_over(datum, *m))
        }
        (None, Some(coords)) => {
            let offset: Result<Vec<Rat>, Error> =
                coords.split(',').map(parse_rat).collect();
            datum.apartment_point(offset?)
        }
        (None, None) => datum.apartment_point(vec![Rat::from_integer(0); datum.rank()]),
        (Some(_), Some(_)) => Err(Error::Internal(
            "--rho-over and --point are mutually exclusive".into(),
        )),
    }
}

fn emit(format: Format, value: &serde_json::Value, tsv: String) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(value).expect("serializable")
        ),
        Format::Tsv => print!("{tsv}"),
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    match &cli.command {
        Command::Roots { ty } => cmd_roots(cli.format, ty),
        Command::RegularOrders { ty, ceiling } => cmd_regular_orders(cli.format, ty, *ceiling),
        Command::Grading { point, ceiling } => cmd_grading(cli.format, point, *ceiling),
        Command::G2 { sub } => match sub {
            G2Command::Delta { coeffs } => cmd_g2_delta(cli.format, coeffs),
            G2Command::Classify { q, budget } => cmd_g2_classify(cli.format, *q, *budget),
            G2Command::Identity { seed, count } => cmd_g2_identity(cli.format, *seed, *count),
        },
        Command::Hm {
            point,
            q,
            ext_degree,
            budget,
            ceiling,
        } => cmd_hm(cli.format, point, *q, *ext_degree, *budget, *ceiling),
    }
}

fn cmd_roots(format: Format, ty: &str) -> Result<(), Error> {
    let datum = build_root_system(parse_type(ty)?);
    let value = datum.json_report();
    let mut tsv = String::new();
    for (k, r) in datum.roots.iter().enumerate() {
        let coords: Vec<String> = r.iter().map(|c| c.to_string()).collect();
        tsv.push_str(&format!("root\t{k}\t{}\n", coords.join(",")));
    }
    emit(format, &value, tsv);
    Ok(())
}

fn cmd_regular_orders(format: Format, ty: &str, ceiling: u64) -> Result<(), Error> {
    let datum = build_root_system(parse_type(ty)?);
    let orders = weyl::regular_elliptic_orders(&datum, ceiling)?;
    let value = json!({ "type": datum.ty.to_string(), "orders": orders });
    let tsv = format!(
        "orders\t{}\n",
        orders
            .iter()
            .map(|o| o.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    emit(format, &value, tsv);
    Ok(())
}

fn cmd_grading(format: Format, args: &PointArgs, ceiling: u64) -> Result<(), Error> {
    let datum = build_root_system(parse_type(&args.ty)?);
    let x = resolve_point(&datum, args)?;
    let algebra = structure_constants(&datum)?;
    let quotient = mpgrading::compute_mp_quotient(&datum, &x);
    let grading = mpgrading::vinberg_grading(&datum, &algebra, &x);
    let bracket = mpgrading::check_grading_bracket(&algebra, &grading);
    let bracket_str = match bracket {
        mpgrading::GradingCertificate::Pass => "pass".to_string(),
        mpgrading::GradingCertificate::Violation(i, j) => format!("violation at ({i}, {j})"),
    };

    // the order criterion: the point carries stable vectors exactly when it
    // is affine-Weyl conjugate to x0 + rho-check/m for m in the regular
    // elliptic order set
    let orders = weyl::regular_elliptic_orders(&datum, ceiling)?;
    let (reduced, _) = datum.reduce_to_alcove(&x);
    let matches_m = orders.iter().copied().find(|&m| {
        let (canon, _) = datum.reduce_to_alcove(&rho_over(&datum, m as i64));
        canon.offset == reduced.offset
    });
    let value = json!({
        "type": datum.ty.to_string(),
        "point": x.offset.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "quotient": quotient.json_report(&datum),
        "grading_dims": grading.piece_dims(),
        "bracket_certificate": bracket_str,
        "regular_elliptic_orders": orders,
        "verdict": {
            "matches_rho_over": matches_m,
            "stable_vectors_exist": matches_m.is_some(),
        },
    });
    let tsv = format!(
        "order\t{}\nr_of_x\t{}\nquotient_type\t{}\ngrading_dims\t{}\nbracket\t{}\nstable_vectors_exist\t{}\n",
        quotient.m,
        quotient.r,
        quotient.quotient_type.label(),
        grading
            .piece_dims()
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(","),
        bracket_str,
        matches_m.is_some(),
    );
    emit(format, &value, tsv);
    Ok(())
}

fn cmd_g2_delta(format: Format, coeffs: &str) -> Result<(), Error> {
    let vals: Result<Vec<i64>, Error> = coeffs
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| Error::Internal(format!("cannot parse integer '{s}'")))
        })
        .collect();
    let vals = vals?;
    let r = IntRing;
    let f = g2case::P1P3Vector::<IntRing>::new(vals.iter().map(|&v| r.from_i64(v)).collect())?;
    let delta = g2case::delta_int(&f)?;
    let h = g2case::h6(&r, &f);
    let g = g2case::g6(&r, &f);
    let identity_holds = delta == &h * &h * &h * &g;
    let value = json!({
        "coeffs": vals,
        "delta": delta.to_string(),
        "h6": h.to_string(),
        "g6": g.to_string(),
        "identity_holds": identity_holds,
    });
    let tsv = format!("delta\t{delta}\nh6\t{h}\ng6\t{g}\nidentity\t{identity_holds}\n");
    emit(format, &value, tsv);
    if identity_holds {
        Ok(())
    } else {
        Err(Error::Internal("delta identity failed".into()))
    }
}

fn cmd_g2_classify(format: Format, q: u16, budget: usize) -> Result<(), Error> {
    let report = g2case::classify_stable(q, budget)?;
    if !report.hard_failures.is_empty() {
        return Err(Error::Internal(format!(
            "destabilizer found for {} nonvanishing vectors",
            report.hard_failures.len()
        )));
    }
    let value = serde_json::to_value(&report).expect("serializable");
    let mut tsv = format!(
        "q\t{}\ntotal\t{}\nnonzero_delta\t{}\nzero_delta\t{}\nuncertified\t{}\nmax_ext_degree\t{}\n",
        report.q,
        report.total,
        report.nonzero_delta,
        report.zero_delta_total,
        report.uncertified.len(),
        report.max_ext_degree,
    );
    for o in &report.orbits {
        tsv.push_str(&format!(
            "orbit\t{}\t{}\t{}\t{}\n",
            o.rep
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(","),
            o.size,
            o.stabilizer_order,
            o.scan_clear,
        ));
    }
    emit(format, &value, tsv);
    Ok(())
}

fn cmd_g2_identity(format: Format, seed: u64, count: usize) -> Result<(), Error> {
    let r = IntRing;
    let mut rng = XorShift64Star::new(seed);
    let mut passes = 0usize;
    let mut first_failure: Option<Vec<i64>> = None;
    for _ in 0..count {
        let vals: Vec<i64> = (0..8).map(|_| rng.int_in(-5, 5)).collect();
        let f = g2case::P1P3Vector::<IntRing> {
            co: vals.iter().map(|&v| r.from_i64(v)).collect(),
        };
        let h = g2case::h6(&r, &f);
        let g = g2case::g6(&r, &f);
        if g2case::delta_int(&f)? == &h * &h * &h * &g {
            passes += 1;
        } else if first_failure.is_none() {
            first_failure = Some(vals);
        }
    }
    let value = json!({
        "seed": seed,
        "count": count,
        "passes": passes,
        "first_failure": first_failure,
    });
    let tsv = format!("identity_passes\t{passes}/{count}\n");
    emit(format, &value, tsv);
    if passes == count {
        Ok(())
    } else {
        Err(Error::Internal("delta identity failed".into()))
    }
}

fn parse_q(q: u16) -> Result<(u16, u32), Error> {
    for p in [2u16, 3, 5, 7, 11, 13] {
        for e in 1..=3u32 {
            if (p as u64).pow(e) == q as u64 {
                return Ok((p, e));
            }
        }
    }
    Err(Error::UnsupportedField { p: q as u32, e: 1 })
}

fn cmd_hm(
    format: Format,
    args: &PointArgs,
    q: u16,
    ext_degree: u32,
    budget: usize,
    ceiling: usize,
) -> Result<(), Error> {
    let datum = build_root_system(parse_type(&args.ty)?);
    let x = resolve_point(&datum, args)?;
    let algebra = structure_constants(&datum)?;
    let quotient = mpgrading::compute_mp_quotient(&datum, &x);
    let grading = mpgrading::vinberg_grading(&datum, &algebra, &x);
    let (p, e0) = parse_q(q)?;
    let base = Fq::new(p, e0)?;

    let m = quotient.m as usize;
    let basis_idx: &[usize] = &grading.pieces[(m - 1) % m];
    let dim = basis_idx.len();
    let nr = datum.num_roots();
    let weights: Vec<Vec<i64>> = basis_idx
        .iter()
        .map(|&b| {
            if b < nr {
                (0..datum.rank())
                    .map(|j| -datum.root_coroot_pairing(b, j))
                    .collect()
            } else {
                vec![0; datum.rank()]
            }
        })
        .collect();
    let reps = chamber_cocharacters(&weights, datum.rank())?;

    let total = (base.q() as u128).checked_pow(dim as u32);
    match total {
        Some(t) if t <= ceiling as u128 => {}
        _ => return Err(Error::BudgetExhausted),
    }
    let total = base.q().pow(dim as u32);
    let is_torus = quotient.phi_x.is_empty();

    // destabilizer scan state per extension degree
    struct Level {
        ext: u32,
        field: Fq,
        emb: Vec<u16>,
        gens: Vec<Vec<Vec<u16>>>,
    }
    let mut levels: Vec<Level> = Vec::new();
    if !is_torus {
        for e in 1..=ext_degree {
            if e0 * e > 3 {
                break;
            }
            let field = Fq::new(p, e0 * e)?;
            let emb = field.embedding_from(&base)?;
            let mut offsets = vec![1u16];
            if field.e > 1 {
                offsets.push(field.p);
            }
            let mut gens = Vec::new();
            for &alpha in &quotient.phi_x {
                for &t in &offsets {
                    gens.push(algebra.rootgroup_matrix(&field, alpha, &t, basis_idx));
                }
            }
            levels.push(Level {
                ext: e,
                field,
                emb,
                gens,
            });
        }
    }

    let mut vectors = Vec::new();
    let mut tsv = String::new();
    for idx in 0..total {
        let mut coords = vec![0u16; dim];
        let mut n = idx;
        for c in coords.iter_mut() {
            *c = (n % base.q()) as u16;
            n /= base.q();
        }
        let v = WeightedVector::<Fq>::new(coords.clone(), weights.clone())?;
        let t_stable = stability::torus_stable(&base, &v, datum.rank())?;
        let t_semi = stability::torus_semistable(&base, &v, datum.rank())?;
        let mut verdict;
        let mut certificate = serde_json::Value::Null;
        if is_torus {
            verdict = if t_stable {
                "stable"
            } else if t_semi {
                "semistable_not_stable"
            } else {
                "unstable"
            };
        } else if !t_stable {
            // already destabilized by the fixed torus itself
            verdict = "certified_not_stable";
            certificate = json!({ "word": [], "cochar": first_empty_cochar(&base, &v, &reps) });
        } else {
            verdict = "no_destabilizer_found";
            for level in &levels {
                let ext_coords: Vec<u16> =
                    coords.iter().map(|&c| level.emb[c as usize]).collect();
                let ev = WeightedVector::<Fq>::new(ext_coords, weights.clone())?;
                if let Some(cert) =
                    stability::find_destabilizer(&level.field, &ev, &level.gens, &reps, budget)?
                {
                    verdict = "certified_not_stable";
                    certificate = json!({
                        "word": cert.word,
                        "cochar": cert.cochar,
                        "ext_degree": level.ext,
                    });
                    break;
                }
            }
        }
        let coord_str = coords
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        tsv.push_str(&format!(
            "vector\t{coord_str}\t{t_stable}\t{t_semi}\t{verdict}\n"
        ));
        vectors.push(json!({
            "coords": coords,
            "torus_stable": t_stable,
            "torus_semistable": t_semi,
            "verdict": verdict,
            "certificate": certificate,
        }));
    }
    let value = json!({
        "type": datum.ty.to_string(),
        "point": x.offset.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "q": q,
        "piece_dim": dim,
        "quotient_type": quotient.quotient_type.label(),
        "torus_complete": is_torus,
        "weights": weights,
        "vectors": vectors,
    });
    emit(format, &value, tsv);
    Ok(())
}

fn first_empty_cochar(base: &Fq, v: &WeightedVector<Fq>, reps: &[Cocharacter]) -> Cocharacter {
    reps.iter()
        .find(|mu| !mu.is_zero() && stability::negative_weight_set(base, mu, v).is_empty())
        .expect("torus-unstable vector has a witness among the face representatives")
        .clone()
}
