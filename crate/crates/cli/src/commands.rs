use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use lambda_tree::format::fmt_g;
use lambda_tree::gibbs::{
    fields_from_ratios, finite_volume_measure, is_consistent, propagate, BoundaryFields, FieldRatios, Interaction,
};
use lambda_tree::ground::{
    brute_force_minima, generators_for, is_ground_state, realize, sample_family, MAX_BRUTE_FORCE_DEPTH,
};
use lambda_tree::model::{classify_region, LambdaParams, Region};
use lambda_tree::solver::{
    count_ti_roots, evaluate_point, sweep as run_sweep, two_periodic_report, write_csv, write_json_lines,
    BoltzmannWeights, GridPoint, SweepConfig, CSV_HEADER,
};
use lambda_tree::{TreeCoord, TreeShape};

use crate::{json_text, read_json, AnyParams, Couplings, Format, Output};

fn field(obj: &Value, name: &str) -> Result<Option<f64>> {
    match obj.get(name) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v.as_f64().map(Some).ok_or_else(|| anyhow!("{name} must be a number")),
    }
}

impl Couplings {
    fn file(&self) -> Result<Option<Value>> {
        self.config.as_ref().map(read_json).transpose()
    }

    pub fn resolve(&self) -> Result<LambdaParams> {
        let file = self.file()?;
        let pick = |flag: Option<f64>, name: &str| -> Result<Option<f64>> {
            match (flag, &file) {
                (Some(v), _) => Ok(Some(v)),
                (None, Some(obj)) => field(obj, name),
                (None, None) => Ok(None),
            }
        };
        let (a, b, c) = (pick(self.a, "a")?, pick(self.b, "b")?, pick(self.c, "c")?);
        let beta = pick(self.beta, "beta")?.unwrap_or(1.0);
        match (a, b, c) {
            (Some(a), Some(b), Some(c)) => Ok(LambdaParams::new(a, b, c, beta)?),
            _ => bail!("couplings --a, --b and --c are all required"),
        }
    }
}

impl AnyParams {
    fn resolve(&self) -> Result<GridPoint> {
        let file = self.couplings.file()?;
        let from_file = |name: &str| file.as_ref().map_or(Ok(None), |obj| field(obj, name));
        let xw = self.xw.map_or_else(|| from_file("xw"), |v| Ok(Some(v)))?;
        let yw = self.yw.map_or_else(|| from_file("yw"), |v| Ok(Some(v)))?;
        let zw = self.zw.map_or_else(|| from_file("zw"), |v| Ok(Some(v)))?;
        match (xw, yw, zw) {
            (None, None, None) => Ok(GridPoint::Couplings(self.couplings.resolve()?)),
            (Some(x), Some(y), Some(z)) => Ok(GridPoint::Weights(BoltzmannWeights::new(x, y, z)?)),
            _ => bail!("weights --xw, --yw and --zw must be given together"),
        }
    }
}

pub fn classify(params: &Couplings, tol: f64, out: &Output) -> Result<()> {
    let report = classify_region(&params.resolve()?, tol);
    let text = match out.format_or(Format::Json) {
        Format::Json => json_text(serde_json::to_value(&report)?),
        Format::Csv => {
            let mut s = String::from("region,energy,active\n");
            for (region, u) in Region::ALL.into_iter().zip(report.energies) {
                s.push_str(&format!("{region},{},{}\n", fmt_g(u), report.active_regions.contains(&region)));
            }
            s
        }
    };
    out.emit(&text)
}

#[derive(Args)]
pub struct GroundArgs {
    #[command(flatten)]
    params: Couplings,
    /// Region whose constructions to list; verified at its representative triple.
    #[arg(long, conflicts_with_all = ["a", "b", "c"])]
    region: Option<Region>,
    /// Truncation depth used for verification and sampling.
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// Largest family index passed to the generator constructions.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Number of members drawn from the region's uncountable family.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Also enumerate every minimizing configuration (depth at most 2).
    #[arg(long)]
    brute_force: bool,
    #[command(flatten)]
    out: Output,
}

pub fn ground(args: &GroundArgs) -> Result<()> {
    let (p, regions) = match args.region {
        Some(r) => (r.representative(), vec![r]),
        None => {
            let p = args.params.resolve()?;
            (p, classify_region(&p, args.tol).active_regions)
        }
    };
    let mut catalogs = Vec::new();
    let mut rows = Vec::new();
    for &region in &regions {
        let catalog = generators_for(region, args.n);
        let mut generators = Vec::new();
        for g in &catalog.generators {
            let check = is_ground_state(&realize(g, args.depth)?, &p, args.tol);
            rows.push(format!("{region},generator,{},{}", spins(&g.entries), check.holds));
            generators.push(json!({
                "entries": g.entries,
                "period": g.period,
                "verified": check.holds,
                "witness": check.witness,
            }));
        }
        catalogs.push(json!({"region": region, "generators": generators, "families": catalog.families}));
    }

    let mut samples = Vec::new();
    if let Some(count) = args.samples {
        let region = regions
            .iter()
            .copied()
            .find(|r| matches!(r, Region::A2 | Region::A5))
            .ok_or_else(|| anyhow!("sampling needs region A2 or A5"))?;
        for cfg in sample_family(region, count, args.seed, args.depth)? {
            let check = is_ground_state(&cfg, &p, args.tol);
            rows.push(format!("{region},sample,{cfg},{}", check.holds));
            samples.push(json!({"configuration": cfg.to_string(), "verified": check.holds}));
        }
    }

    let mut doc = json!({
        "params": p,
        "regions": regions,
        "verification_depth": args.depth,
        "catalogs": catalogs,
        "samples": samples,
    });
    if args.brute_force {
        let depth = args.depth.min(MAX_BRUTE_FORCE_DEPTH);
        let minima = brute_force_minima(&p, depth, args.tol)?;
        for m in &minima {
            rows.push(format!("-,minimum,{m},true"));
        }
        doc["brute_force"] = json!({
            "depth": depth,
            "minima": minima.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        });
    }

    let text = match args.out.format_or(Format::Json) {
        Format::Json => json_text(doc),
        Format::Csv => format!("region,kind,spins,verified\n{}\n", rows.join("\n")),
    };
    args.out.emit(&text)
}

fn spins(entries: &[lambda_tree::Spin]) -> String {
    entries.iter().map(|s| s.to_string()).collect()
}

pub fn solve(params: &AnyParams, out: &Output) -> Result<()> {
    let point = params.resolve()?;
    let row = evaluate_point(&point)?;
    let text = match out.format_or(Format::Json) {
        Format::Csv => format!("{CSV_HEADER}\n{}\n", row.csv_line()),
        Format::Json => {
            let w = BoltzmannWeights::new(row.xw, row.yw, row.zw)?;
            let params = match point {
                GridPoint::Couplings(p) => json!(p),
                GridPoint::Weights(_) => Value::Null,
            };
            json_text(json!({
                "params": params,
                "weights": w,
                "fixed_points": count_ti_roots(&w),
                "periodic": two_periodic_report(&w)?,
                "phase_transition": row.phase_transition,
            }))
        }
    };
    out.emit(&text)
}

pub fn sweep(config: &PathBuf, threads: Option<usize>, out: &Output) -> Result<()> {
    let text = std::fs::read_to_string(config).with_context(|| format!("reading {}", config.display()))?;
    let points = SweepConfig::from_json(&text)?.points()?;
    let rows = run_sweep(&points, threads)?;
    let mut buf = Vec::new();
    match out.format_or(Format::Csv) {
        Format::Csv => write_csv(&rows, &mut buf)?,
        Format::Json => write_json_lines(&rows, &mut buf)?,
    }
    out.emit(&String::from_utf8(buf)?)
}

#[derive(Args)]
pub struct FieldArgs {
    #[command(flatten)]
    params: Couplings,
    /// The truncation V_n.
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// JSON object mapping vertex coordinates to field vectors (h_1, h_2, h_3).
    /// Without it, random leaf fields are pushed up to the root by the recursion.
    #[arg(long)]
    fields: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Added to the first field component at the first vertex of W_{n-1}.
    #[arg(long, allow_negative_numbers = true)]
    perturb: Option<f64>,
    #[command(flatten)]
    out: Output,
}

impl FieldArgs {
    fn setup(&self) -> Result<(Interaction, TreeShape, BoundaryFields)> {
        let inter = Interaction::from_lambda(&self.params.resolve()?);
        let shape = TreeShape::binary(self.depth);
        let mut h = match &self.fields {
            Some(path) => fields_from_file(path, shape, inter.q())?,
            None => recursion_fields(&inter, shape, self.seed)?,
        };
        if let Some(delta) = self.perturb {
            if self.depth == 0 {
                bail!("--perturb needs depth at least 1");
            }
            let x = shape.coord_of(shape.level_range(self.depth - 1).start);
            let mut v = h.get(&x)?.to_vec();
            v[0] += delta;
            h.set(&x, v)?;
        }
        Ok((inter, shape, h))
    }
}

fn fields_from_file(path: &PathBuf, shape: TreeShape, q: usize) -> Result<BoundaryFields> {
    let map: BTreeMap<String, Vec<f64>> = serde_json::from_value(read_json(path)?)
        .with_context(|| format!("{}: expected {{coord: [h...]}}", path.display()))?;
    let mut h = BoundaryFields::new(shape, q);
    for (coord, v) in map {
        let x: TreeCoord = coord.parse()?;
        if shape.contains(&x) {
            h.set(&x, v)?;
        }
    }
    Ok(h)
}

fn recursion_fields(inter: &Interaction, shape: TreeShape, seed: u64) -> Result<BoundaryFields> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut leaves = FieldRatios::new(shape, inter.q());
    for x in shape.level(shape.depth()) {
        leaves.set(&x, (0..inter.q() - 1).map(|_| rng.gen_range(-1.0f64..1.0).exp()).collect())?;
    }
    Ok(fields_from_ratios(&propagate(inter, &leaves)?, 0.0)?)
}

fn check_capacity(shape: TreeShape, q: usize) -> Result<()> {
    let states = (q as f64).powi(shape.vertex_count() as i32);
    if states > lambda_tree::gibbs::MAX_STATES as f64 {
        return Err(lambda_tree::Error::Capacity(format!(
            "depth {} needs {q}^{} states, limit is {}",
            shape.depth(),
            shape.vertex_count(),
            lambda_tree::gibbs::MAX_STATES
        ))
        .into());
    }
    Ok(())
}

pub fn consistency(args: &FieldArgs) -> Result<()> {
    check_capacity(TreeShape::binary(args.depth), 3)?;
    let (inter, shape, h) = args.setup()?;
    let report = is_consistent(&inter, shape, &h)?;
    let text = match args.out.format_or(Format::Json) {
        Format::Json => {
            json_text(json!({"depth": args.depth, "max_deviation": report.max_deviation, "pass": report.pass}))
        }
        Format::Csv => {
            format!("depth,max_deviation,pass\n{},{},{}\n", args.depth, fmt_g(report.max_deviation), report.pass)
        }
    };
    args.out.emit(&text)
}

pub fn measure(args: &FieldArgs) -> Result<()> {
    check_capacity(TreeShape::binary(args.depth), 3)?;
    let (inter, shape, h) = args.setup()?;
    let mu = finite_volume_measure(&inter, shape, &h)?;
    let text = match args.out.format_or(Format::Csv) {
        Format::Csv => mu.to_csv(),
        Format::Json => json_text(json!({
            "depth": args.depth,
            "log_partition": mu.log_partition,
            "probabilities": (0..mu.probabilities.len())
                .map(|c| json!({"configuration": mu.label(c), "probability": mu.probabilities[c]}))
                .collect::<Vec<_>>(),
        })),
    };
    args.out.emit(&text)
}
