use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use aitgl_core::game::{
    audit_level_paints, audit_run_disjointness, parse_script, play, AliceStrategy, BlindBob,
    BobStrategy, Copycat, LexFirstHunter, Mirror, OnesBob, PassBob, RandomBob, ScriptedBob,
    ZerosBob,
};
use aitgl_core::machine::{min_program_length, Dovetailer};
use aitgl_core::probe::{
    estimate_minf_seq, estimate_minf_string, Alternating, PaddedWord, SequenceGen, Zeros,
};
use aitgl_core::sample::seeded_shuffle;
use aitgl_core::tokens::{EventRecord, TokenBoard, TokenError};
use aitgl_core::trimmer::{trim, ListEnumeration};
use aitgl_core::{BitString, StringSet, TrimConfig};

use crate::output::{resolve_out, Trace};
use crate::{
    BobSpec, CliError, Command, EnumerateArgs, EstimateArgs, EstimateMode, OrderSpec, PlayArgs,
    SeqSpec, TokensArgs, TrimArgs,
};

pub fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Enumerate(a) => enumerate(a),
        Command::Trim(a) => trim_cmd(a),
        Command::Tokens(a) => tokens(a),
        Command::Play(a) => play_cmd(a),
        Command::Estimate(a) => estimate(a),
    }
}

fn read_set(path: &Path) -> Result<StringSet, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(path, e))
}

fn shortlex_strings(set: &StringSet) -> Vec<String> {
    set.sorted().iter().map(ToString::to_string).collect()
}

fn show(x: &BitString) -> String {
    if x.is_empty() {
        "Λ".into()
    } else {
        x.to_string()
    }
}

fn show_list(xs: &[BitString]) -> String {
    xs.iter().map(show).collect::<Vec<_>>().join(", ")
}

fn enumerate(a: EnumerateArgs) -> Result<(), CliError> {
    let (k, max_len) = (a.k as usize, a.max_len as usize);
    let mut trace = Trace::create(resolve_out(a.out.out.as_deref(), "enumerate.jsonl"))?;

    #[derive(Serialize)]
    struct Found<'a> {
        string: &'a BitString,
        len: usize,
        program: &'a BitString,
        round: u64,
    }
    let mut set = StringSet::new();
    for d in Dovetailer::up_to_length(k, Some(max_len), Some(a.budget)).run_to_completion() {
        trace.record(&Found {
            string: &d.string,
            len: d.string.len(),
            program: &d.program,
            round: d.round,
        })?;
        set.insert(d.string);
    }

    #[derive(Serialize)]
    struct Summary {
        k: usize,
        budget: u64,
        max_len: usize,
        count: usize,
        width: usize,
        width_bound: u64,
        per_length: BTreeMap<usize, usize>,
        members: Vec<String>,
    }
    let width_bound = 1u64 << (k + 1);
    let summary = Summary {
        k,
        budget: a.budget,
        max_len,
        count: set.len(),
        width: set.width(),
        width_bound,
        per_length: set.per_length().clone(),
        members: shortlex_strings(&set),
    };
    let path = trace.summary(&summary)?;

    println!(
        "S(k={k}, budget={}, max_len={max_len}): {} strings",
        a.budget,
        set.len()
    );
    println!("width {} (bound 2^(k+1) = {width_bound})", set.width());
    if set.len() <= 64 {
        println!("members: {}", show_list(&set.sorted()));
    }
    println!("trace: {}", path.display());
    if set.width() as u64 >= width_bound {
        return Err(CliError::Breach {
            name: "width_bound",
            step: set.len(),
            detail: format!("width {} >= {width_bound}", set.width()),
        });
    }
    Ok(())
}

fn trim_cmd(a: TrimArgs) -> Result<(), CliError> {
    let cfg = TrimConfig::new(a.w as usize, a.depth as usize, a.horizon as usize).map_err(|e| {
        CliError::Usage {
            flag: "--w/--depth",
            message: e.to_string(),
        }
    })?;
    let (source, report) = match (&a.from_machine, &a.from_file) {
        (Some(k), _) => {
            let mut dt = Dovetailer::up_to_length(*k as usize, Some(cfg.depth), None);
            (format!("machine:{k}"), trim(&mut dt, &cfg))
        }
        (None, Some(path)) => {
            let set = read_set(path)?;
            let mut list = ListEnumeration::new(set.members().to_vec());
            (format!("file:{}", path.display()), trim(&mut list, &cfg))
        }
        (None, None) => unreachable!("clap requires a source"),
    };

    let mut trace = Trace::create(resolve_out(a.out.out.as_deref(), "trim.jsonl"))?;
    for d in &report.decisions {
        trace.record(d)?;
    }

    #[derive(Serialize)]
    struct Summary<'a> {
        source: &'a str,
        config: TrimConfig,
        snapshot_size: usize,
        result: Vec<String>,
        leafless: bool,
        width_ok: bool,
        keeps_snapshot_paths: bool,
        saturated: usize,
    }
    let summary = Summary {
        source: &source,
        config: cfg,
        snapshot_size: report.snapshot.len(),
        result: shortlex_strings(&report.result),
        leafless: report.is_leafless(),
        width_ok: report.width_ok(),
        keeps_snapshot_paths: report.keeps_snapshot_paths(),
        saturated: report.saturated,
    };
    let path = trace.summary(&summary)?;

    println!(
        "trim {source} w={} depth={} horizon={}: snapshot {} strings, T has {}",
        cfg.w,
        cfg.depth,
        cfg.horizon,
        report.snapshot.len(),
        report.result.len()
    );
    if report.result.len() <= 64 {
        println!("T = {{{}}}", show_list(&report.result.sorted()));
    }
    println!(
        "leafless {} width_ok {} keeps_snapshot_paths {}",
        summary.leafless, summary.width_ok, summary.keeps_snapshot_paths
    );
    println!("trace: {}", path.display());

    let checks = [
        ("leafless", summary.leafless),
        ("width", summary.width_ok),
        ("snapshot_paths", summary.keeps_snapshot_paths),
    ];
    if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
        return Err(CliError::Breach {
            name,
            step: cfg.horizon,
            detail: "see trace summary".into(),
        });
    }
    Ok(())
}

fn tokens(a: TokensArgs) -> Result<(), CliError> {
    let set = read_set(&a.input)?;
    let depth = set.max_len().unwrap_or(0);
    let w = a.w.map_or(set.width().max(1), |w| w as usize);
    let mut order = set.members().to_vec();
    let order_name = match a.order {
        OrderSpec::Shortlex => {
            order.sort();
            "shortlex".to_string()
        }
        OrderSpec::File => "file".to_string(),
        OrderSpec::Shuffle(seed) => {
            seeded_shuffle(&mut order, seed);
            format!("shuffle:{seed}")
        }
    };

    let mut trace = Trace::create(resolve_out(a.out.out.as_deref(), "tokens.jsonl"))?;
    let mut board = TokenBoard::new(w);
    let mut breach = None;
    for (i, x) in order.iter().enumerate() {
        let step = i + 1;
        match board.observe(x.clone()) {
            Ok(event) => trace.record(&EventRecord::new(step, x.clone(), &event))?,
            Err(e @ TokenError::CapacityExceeded { .. }) => {
                breach = Some(("capacity", step, e.to_string()));
                break;
            }
            Err(e @ TokenError::Duplicate(_)) => return Err(CliError::input(&a.input, e)),
        }
        if let Err(detail) = board.check_invariants() {
            breach = Some(("token_board", step, detail));
            break;
        }
    }

    let leafless = set.is_leafless(depth);
    let mut ends: Vec<BitString> = set
        .maximal_paths(depth)
        .iter()
        .map(|p| p.last().clone())
        .collect();
    ends.sort();
    let positions: Vec<BitString> = (1..=board.tokens_used())
        .map(|t| board.position(t).expect("placed").clone())
        .collect();
    let mut sorted_positions = positions.clone();
    sorted_positions.sort();
    let bijective = sorted_positions == ends;
    if breach.is_none() && leafless && !bijective {
        breach = Some((
            "path_bijection",
            order.len(),
            "tokens do not match maximal paths".into(),
        ));
    }

    #[derive(Serialize)]
    struct Summary {
        order: String,
        w: usize,
        depth: usize,
        observed: usize,
        tokens_used: usize,
        leafless_input: bool,
        paths: Vec<String>,
        token_positions: Vec<String>,
        bijective: bool,
        breach: Option<String>,
    }
    let summary = Summary {
        order: order_name,
        w,
        depth,
        observed: board.observed().len(),
        tokens_used: board.tokens_used(),
        leafless_input: leafless,
        paths: ends.iter().map(ToString::to_string).collect(),
        token_positions: positions.iter().map(ToString::to_string).collect(),
        bijective,
        breach: breach
            .as_ref()
            .map(|(n, s, d)| format!("{n} at step {s}: {d}")),
    };
    let path = trace.summary(&summary)?;

    println!(
        "tokens: {} strings in {} order, w={w}, {} tokens used",
        set.len(),
        summary.order,
        board.tokens_used()
    );
    for (i, p) in positions.iter().enumerate() {
        println!("  token {} -> {}", i + 1, show(p));
    }
    if !leafless {
        println!("note: input is not leafless to depth {depth}");
    }
    println!("paths match tokens: {bijective}");
    println!("trace: {}", path.display());

    match breach {
        Some((name, step, detail)) => Err(CliError::Breach { name, step, detail }),
        None => Ok(()),
    }
}

fn make_bob(spec: &BobSpec) -> Result<Box<dyn BobStrategy>, CliError> {
    Ok(match spec {
        BobSpec::Blind(f) => Box::new(BlindBob::new(*f)),
        BobSpec::Pass => Box::new(PassBob),
        BobSpec::Copycat => Box::new(Copycat::default()),
        BobSpec::Mirror => Box::new(Mirror),
        BobSpec::Zeros => Box::new(ZerosBob::default()),
        BobSpec::Ones => Box::new(OnesBob::default()),
        BobSpec::Hunter => Box::new(LexFirstHunter),
        BobSpec::Random(seed) => Box::new(RandomBob::new(*seed)),
        BobSpec::File(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let moves = parse_script(&text).map_err(|e| CliError::input(path, e))?;
            Box::new(ScriptedBob::new(format!("file:{}", path.display()), moves))
        }
    })
}

fn play_cmd(a: PlayArgs) -> Result<(), CliError> {
    let mut bob = make_bob(&a.bob)?;
    let mut alice = AliceStrategy::new(a.w as usize);
    let game = play(&mut alice, bob.as_mut(), a.horizon as usize);

    let mut trace = Trace::create(resolve_out(a.out.out.as_deref(), "play.jsonl"))?;
    for rec in game.records() {
        trace.record(rec)?;
    }
    let paints = game.alice_paints();
    let disjoint = audit_run_disjointness(&paints, &game.origins);
    let own = audit_level_paints(&paints, &game.origins);

    #[derive(Serialize)]
    struct Summary<'a> {
        #[serde(flatten)]
        game: aitgl_core::game::Summary<'a>,
        runs_disjoint: bool,
        level_paints_ok: bool,
    }
    let path = trace.summary(&Summary {
        game: game.summary(),
        runs_disjoint: disjoint.is_ok(),
        level_paints_ok: own.is_ok(),
    })?;

    let d = &game.diagnostic;
    println!(
        "play w={} vs {} for {} plies",
        a.w,
        game.bob,
        game.records().len()
    );
    match game.first_coincidence {
        Some(c) => println!("coincidence win at length {} (ply {})", c.len, c.ply),
        None => println!("no coincidence win"),
    }
    println!(
        "lex-first green chain: consistent to {}, {} non-red of depth {}",
        d.consistent_to.map_or("-".into(), |c| c.to_string()),
        d.non_red_count,
        d.depth
    );
    println!("trace: {}", path.display());

    if let Some(v) = &game.violation {
        let step = match v {
            aitgl_core::game::GameError::WrongTurn { ply, .. }
            | aitgl_core::game::GameError::QuotaExceeded { ply, .. } => *ply,
        };
        return Err(CliError::Breach {
            name: "alice_quota",
            step,
            detail: v.to_string(),
        });
    }
    if let Err(detail) = disjoint {
        return Err(CliError::Breach {
            name: "run_disjointness",
            step: game.records().len(),
            detail,
        });
    }
    if let Err(detail) = own {
        return Err(CliError::Breach {
            name: "level_paints",
            step: game.records().len(),
            detail,
        });
    }
    Ok(())
}

/// Reads the lex-first green chain tip from the summary of a `play` trace.
fn chain_from_trace(path: &Path) -> Result<BitString, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let last = text
        .lines()
        .rev()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| CliError::input(path, "empty trace"))?;
    let value: serde_json::Value =
        serde_json::from_str(last).map_err(|e| CliError::input(path, e))?;
    let tip = value
        .pointer("/summary/diagnostic/tip")
        .ok_or_else(|| CliError::input(path, "last line is not a play summary"))?;
    match tip {
        serde_json::Value::Null => Ok(BitString::empty()),
        _ => serde_json::from_value(tip.clone()).map_err(|e| CliError::input(path, e)),
    }
}

fn estimate(a: EstimateArgs) -> Result<(), CliError> {
    let (seq, default_hi): (Box<dyn SequenceGen>, usize) = match &a.seq {
        SeqSpec::Zeros => (Box::new(Zeros), 16),
        SeqSpec::Alt => (Box::new(Alternating), 16),
        SeqSpec::GameTrace(path) => {
            let tip = chain_from_trace(path)?;
            let n = tip.len().max(1);
            (
                Box::new(PaddedWord::new(
                    tip,
                    format!("game-trace:{}", path.display()),
                )),
                n,
            )
        }
    };
    let n_hi = a.n_hi.map_or(default_hi, |n| n as usize);
    let n_lo = a.n_lo.map_or(1, |n| n as usize);
    let k_max = a.k_max.map_or(n_hi + 2, |k| k as usize);
    if a.mode != EstimateMode::MinfStr && (n_lo == 0 || n_lo > n_hi) {
        return Err(CliError::Usage {
            flag: "--n-lo",
            message: format!("window [{n_lo}, {n_hi}] must satisfy 1 <= n_lo <= n_hi"),
        });
    }
    if a.mode == EstimateMode::MinfStr && n_lo > n_hi {
        return Err(CliError::Usage {
            flag: "--n-lo",
            message: format!("string length {n_lo} exceeds window end {n_hi}"),
        });
    }

    let mut trace = Trace::create(resolve_out(a.out.out.as_deref(), "estimate.jsonl"))?;
    #[derive(Serialize)]
    struct Term {
        n: usize,
        value: Option<usize>,
        witness: Option<BitString>,
    }
    let (est, mode_name) = match a.mode {
        EstimateMode::M | EstimateMode::MinfSeq => {
            let lo = if a.mode == EstimateMode::M { 1 } else { n_lo };
            for n in lo..=n_hi {
                let w = min_program_length(&seq.prefix(n), n, k_max, a.budget);
                trace.record(&Term {
                    n,
                    value: w.as_ref().map(|w| w.length),
                    witness: w.map(|w| w.program),
                })?;
            }
            let est = estimate_minf_seq(seq.as_ref(), lo, n_hi, k_max, a.budget);
            (
                est,
                if a.mode == EstimateMode::M {
                    "M"
                } else {
                    "Minf-seq"
                },
            )
        }
        EstimateMode::MinfStr => {
            let x = seq.prefix(n_lo);
            let est = estimate_minf_string(&x, n_hi, k_max, a.budget);
            for n in est.n_range.0..=est.n_range.1 {
                let w = min_program_length(&x, n, k_max, a.budget);
                trace.record(&Term {
                    n,
                    value: w.as_ref().map(|w| w.length),
                    witness: w.map(|w| w.program),
                })?;
            }
            (est, "Minf-str")
        }
    };

    #[derive(Serialize)]
    struct Summary<'a> {
        seq: String,
        mode: &'a str,
        #[serde(flatten)]
        estimate: &'a aitgl_core::probe::Estimate,
    }
    let path = trace.summary(&Summary {
        seq: seq.name(),
        mode: mode_name,
        estimate: &est,
    })?;

    println!(
        "{mode_name} of {} over [{}, {}] with k_max={k_max}, budget={}",
        seq.name(),
        est.n_range.0,
        est.n_range.1,
        a.budget
    );
    match (est.value, &est.witness, est.n) {
        (Some(v), Some(p), Some(n)) => println!("upper bound {v} (program {p} at n={n})"),
        _ => println!("no program within the caps for some length"),
    }
    println!("trace: {}", path.display());
    Ok(())
}
