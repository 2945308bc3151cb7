use serde_json::{json, Value};

use encouple::bits::to_bit_string;
use encouple::densecoding::{
    chi_state, eve_analysis, eve_guess_probability, run_protocol, sweep, transfer_accounting, EveMeasurement,
    Protocol, TransferScheme,
};
use encouple::hyperdet::{
    evaluate_witness_tol, exact_hyperdeterminant, ghz_state_witness, random_witness_search, w_state_witness,
};
use encouple::ising::{coupling, roundtrip_all, roundtrip_check, CouplingQuery};
use encouple::ncoupled::{
    bipartition_entropy, check_maximally_connected_tol, local_pauli_basis, ncoupled_basis, ncoupled_state,
    persistency as persistency_of, q_information, schmidt_decompose, MeasurementBasis,
};
use encouple::stabiliser::{
    classify_errors_with, code, five_qubit_code_check, logical_ops, single_qubit_errors, stabiliser_generators,
    CodeFamily,
};
use encouple::statevec::{gram_deviation, measurement_distribution};
use encouple::{Error, Letter, PauliString, Result, StateVector, Tolerances};

use crate::report::{sig, sig_str, tolerances, Format, Report, Table};
use crate::{BasisArg, ErrorLetters, ProtocolArg, StateArgs, StateKind};

fn build_state(s: &StateArgs) -> Result<StateVector> {
    match s.kind {
        StateKind::Ncoupled => ncoupled_state(s.n, s.parity),
        StateKind::Chi => Ok(chi_state(s.n)?.state),
        StateKind::Ghz => StateVector::ghz(s.n),
        StateKind::W => StateVector::w(s.n),
    }
}

fn kind_name(k: StateKind) -> &'static str {
    match k {
        StateKind::Ncoupled => "ncoupled",
        StateKind::Chi => "chi",
        StateKind::Ghz => "ghz",
        StateKind::W => "w",
    }
}

fn with_state(r: Report, s: &StateArgs) -> Report {
    let r = r.param("state", kind_name(s.kind)).param("n", s.n);
    if s.kind == StateKind::Ncoupled {
        r.param("parity", s.parity.to_string())
    } else {
        r
    }
}

fn amplitude_triples(state: &StateVector) -> Vec<(String, f64, f64)> {
    let n = state.num_qubits();
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 0.0)
        .map(|(i, a)| (to_bit_string(n, i), sig(a.re), sig(a.im)))
        .collect()
}

pub fn state(s: &StateArgs) -> Result<Report> {
    let psi = build_state(s)?;
    let mut r = with_state(Report::new("state"), s);
    let triples = amplitude_triples(&psi);
    r.table = Table::new(&["basis", "re", "im"]);
    for (b, re, im) in &triples {
        r.table.push(vec![b.clone(), re.to_string(), im.to_string()]);
    }
    r.results = json!({ "amplitudes": triples, "norm": sig(psi.norm()) });
    r.check("normalized", (psi.norm() - 1.0).abs() < Tolerances::default().norm);
    Ok(r)
}

pub fn basis(n: usize, tol: f64) -> Result<Report> {
    let states = ncoupled_basis(n)?;
    let labels = local_pauli_basis(n)?;
    let (gram, dev) = gram_deviation(&states)?;
    let mut r = Report::new("basis").param("n", n);
    r.table = Table { header: (1..=gram.len()).map(|j| format!("col{j}")).collect(), rows: Vec::new() };
    for row in &gram {
        r.table.push(row.iter().map(|g| sig_str(g.re)).collect());
    }
    let label_rows: Vec<Value> = labels
        .iter()
        .map(|l| json!({ "index": l.index, "source": l.source_bits(), "word": l.pauli_word, "phase": l.global_phase }))
        .collect();
    let mut results = json!({ "labels": label_rows, "gram_max_deviation": dev });
    if n <= 5 {
        let g: Vec<Vec<[f64; 2]>> = gram.iter().map(|row| row.iter().map(|z| [sig(z.re), sig(z.im)]).collect()).collect();
        results["gram"] = json!(g);
    }
    r.results = results;
    r.check("orthonormal", dev < tol);
    let mut generated = true;
    for (l, s) in labels.iter().zip(&states) {
        generated &= l.state()?.approx_eq(s, tol);
    }
    r.check("local_words_generate_basis", generated);
    Ok(r)
}

pub fn schmidt(s: &StateArgs, m: usize, tol: f64) -> Result<Report> {
    let psi = build_state(s)?;
    let d = schmidt_decompose(&psi, m)?;
    let mut r = with_state(Report::new("schmidt"), s).param("m", m);
    r.table = Table::new(&["term", "coefficient"]);
    for (i, c) in d.coefficients.iter().enumerate() {
        r.table.push(vec![(i + 1).to_string(), sig_str(*c)]);
    }
    let factors = |v: &[StateVector]| v.iter().map(amplitude_triples).collect::<Vec<_>>();
    r.results = json!({
        "rank": d.rank(),
        "coefficients": d.coefficients.iter().map(|c| sig(*c)).collect::<Vec<_>>(),
        "entropy": sig(d.entropy()),
        "left_factors": factors(&d.left_factors),
        "right_factors": factors(&d.right_factors),
    });
    r.check("reconstructs", d.reconstruct().max_deviation(&psi)? < tol);
    Ok(r)
}

pub fn entropy(s: &StateArgs, m: Option<usize>) -> Result<Report> {
    let psi = build_state(s)?;
    let cuts: Vec<usize> = match m {
        Some(m) => vec![m],
        None => (1..s.n).collect(),
    };
    let mut r = with_state(Report::new("entropy"), s);
    if let Some(m) = m {
        r = r.param("m", m);
    }
    r.table = Table::new(&["m", "entropy"]);
    let mut rows = Vec::new();
    for c in cuts {
        let e = bipartition_entropy(&psi, c)?;
        r.table.push(vec![c.to_string(), sig_str(e)]);
        rows.push(json!({ "m": c, "entropy": sig(e) }));
    }
    r.results = json!({ "cuts": rows });
    Ok(r)
}

pub fn connectedness(s: &StateArgs, tol: f64) -> Result<Report> {
    let connected = check_maximally_connected_tol(&build_state(s)?, tol)?;
    let mut r = with_state(Report::new("connectedness"), s);
    r.table = Table::new(&["maximally_connected"]);
    r.table.push(vec![connected.to_string()]);
    r.results = json!({ "maximally_connected": connected });
    Ok(r)
}

pub fn persistency(s: &StateArgs, basis: BasisArg) -> Result<Report> {
    let b = match basis {
        BasisArg::Computational => MeasurementBasis::Computational,
        BasisArg::Hadamard => MeasurementBasis::Hadamard,
    };
    let p = persistency_of(&build_state(s)?, b)?;
    let mut r = with_state(Report::new("persistency"), s).param("basis", json!(b));
    r.table = Table::new(&["persistency"]);
    r.table.push(vec![p.to_string()]);
    r.results = json!({ "persistency": p });
    Ok(r)
}

pub fn qinfo(s: &StateArgs) -> Result<Report> {
    let q = q_information(&build_state(s)?)?;
    let mut r = with_state(Report::new("qinfo"), s);
    r.table = Table::new(&["q_information"]);
    r.table.push(vec![sig_str(q)]);
    r.results = json!({ "q_information": sig(q) });
    Ok(r)
}

const MAX_SUBSET_SWEEP: usize = 10;

pub fn ising(s: &StateArgs, vars: &[usize], eps: f64, roundtrip: Option<f64>, tol: f64) -> Result<Report> {
    if let Some(top) = roundtrip {
        let top_err = roundtrip_check(s.n, top)?;
        let all_err = roundtrip_all(s.n, top)?;
        let mut r = Report::new("ising").param("n", s.n).param("roundtrip", top);
        r.table = Table::new(&["top_error", "lower_order_error"]);
        r.table.push(vec![top_err.to_string(), all_err.to_string()]);
        r.results = json!({ "top_error": top_err, "lower_order_error": all_err });
        r.check("top_coupling_recovered", top_err < tol);
        r.check("lower_order_couplings_recovered", all_err < tol);
        return Ok(r);
    }
    let psi = build_state(s)?;
    let dist = measurement_distribution(&psi);
    let n = s.n;
    let subsets: Vec<Vec<usize>> = if vars.is_empty() {
        if n > MAX_SUBSET_SWEEP {
            return Err(Error::UnsupportedSize { what: "coupling sweep", n, max: MAX_SUBSET_SWEEP });
        }
        let mut all: Vec<Vec<usize>> =
            (1..1usize << n).map(|m| (0..n).filter(|q| m >> (n - 1 - q) & 1 == 1).collect()).collect();
        all.sort_by_key(|v| (v.len(), v.clone()));
        all
    } else {
        if let Some(&bad) = vars.iter().find(|&&v| v == 0 || v > n) {
            return Err(Error::QubitOutOfRange { qubit: bad, n });
        }
        vec![vars.iter().map(|v| v - 1).collect()]
    };
    let mut r = with_state(Report::new("ising"), s).param("eps", eps);
    if !vars.is_empty() {
        r = r.param("vars", json!(vars));
    }
    r.table = Table::new(&["vars", "coupling"]);
    let mut rows = Vec::new();
    for v in subsets {
        let one_based: Vec<usize> = v.iter().map(|q| q + 1).collect();
        let label = one_based.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        let j = match coupling(&dist, &CouplingQuery::new(v)?.with_eps(eps)?) {
            Ok(j) => Some(sig(j)),
            Err(Error::UndefinedCoupling { .. }) => None,
            Err(e) => return Err(e),
        };
        r.table.push(vec![label, j.map_or("undefined".into(), |j| j.to_string())]);
        rows.push(json!({ "vars": one_based, "coupling": j }));
    }
    r.results = json!({ "couplings": rows });
    Ok(r)
}

pub fn hyperdet(s: &StateArgs, search: Option<usize>, seed: u64, tol: f64) -> Result<Report> {
    let psi = build_state(s)?;
    let mut r = with_state(Report::new("hyperdet"), s).param("seed", seed);
    let mut results = serde_json::Map::new();
    r.table = Table::new(&["kind", "f_re", "f_im", "max_partial", "vanishes"]);
    let witness = match s.kind {
        StateKind::W => Some(w_state_witness(s.n)?),
        StateKind::Ghz if s.n >= 4 => Some(ghz_state_witness(s.n)?),
        _ => None,
    };
    if let Some(w) = witness {
        let rep = evaluate_witness_tol(&psi, &w, tol)?;
        r.table.push(vec![
            "constructive".into(),
            sig_str(rep.f_value.0.re),
            sig_str(rep.f_value.0.im),
            rep.max_partial.to_string(),
            rep.vanishes.to_string(),
        ]);
        r.check("constructive_witness_vanishes", rep.vanishes);
        results.insert("constructive".into(), json!({ "witness": w, "report": rep }));
    }
    if s.n <= 3 {
        let d = exact_hyperdeterminant(&psi)?;
        results.insert("exact".into(), json!([sig(d.re), sig(d.im)]));
    }
    if let Some(trials) = search {
        r = r.param("search", trials);
        let out = random_witness_search(&psi, trials, seed)?;
        r.table.push(vec![
            "search".into(),
            sig_str(out.report.f_value.0.re),
            sig_str(out.report.f_value.0.im),
            out.report.max_partial.to_string(),
            out.report.vanishes.to_string(),
        ]);
        results.insert(
            "search".into(),
            json!({ "witness": out.witness, "report": out.report, "trials_run": out.trials_run }),
        );
    }
    r.results = Value::Object(results);
    Ok(r)
}

pub fn densecode(
    protocol: ProtocolArg,
    n: Option<usize>,
    message: Option<&str>,
    sweep_all: bool,
    eve: bool,
    accounting: Option<usize>,
    tol: f64,
) -> Result<Report> {
    let (p, n) = match protocol {
        ProtocolArg::Shared => (Some(Protocol::SharedDictionary), n.unwrap_or(3)),
        ProtocolArg::Chi => (Some(Protocol::SharedDictionary), n.unwrap_or(4)),
        ProtocolArg::DictionaryFree => (Some(Protocol::DictionaryFree), n.unwrap_or(3)),
        ProtocolArg::Traditional => (None, 2),
    };
    if protocol == ProtocolArg::Shared && n != 3 || protocol == ProtocolArg::Chi && n != 4 && n != 6 {
        return Err(Error::InvalidParameter(format!("no {protocol:?} protocol at n = {n}")));
    }
    let mut r = Report::new("densecode").param("protocol", json!(protocol_name(protocol))).param("n", n);
    let mut results = serde_json::Map::new();

    if let Some(bits) = accounting {
        r = r.param("accounting", bits);
        let scheme = match p {
            None => TransferScheme::Traditional,
            Some(Protocol::SharedDictionary) => TransferScheme::SharedDictionary { n },
            Some(Protocol::DictionaryFree) => TransferScheme::DictionaryFree { n },
        };
        let t = transfer_accounting(scheme, bits)?;
        r.table = Table::new(&["payload_bits", "qubit_transfers", "qubits_used"]);
        r.table.push(vec![bits.to_string(), t.qubit_transfers.to_string(), t.qubits_used.to_string()]);
        results.insert("accounting".into(), json!(t));
    }
    let Some(p) = p else {
        if accounting.is_none() {
            return Err(Error::InvalidParameter("traditional coding only supports --accounting".into()));
        }
        r.results = Value::Object(results);
        return Ok(r);
    };

    let run_messages = sweep_all || message.is_some() || (!eve && accounting.is_none());
    if run_messages {
        let transcripts = match message {
            Some(m) if !sweep_all => {
                r = r.param("message", m);
                vec![run_protocol(p, n, m)?]
            }
            _ => {
                r = r.param("sweep", true);
                sweep(p, n)?
            }
        };
        r.table = Table::new(&["message", "word", "outcome", "success_probability", "success"]);
        let mut rows = Vec::new();
        for t in &transcripts {
            r.table.push(vec![
                t.message.clone(),
                t.word.to_string(),
                t.decoder_outcome.clone(),
                sig_str(t.success_probability),
                t.success.to_string(),
            ]);
            rows.push(json!({
                "message": t.message,
                "word": t.word,
                "outcome": t.decoder_outcome,
                "success_probability": sig(t.success_probability),
            }));
        }
        let ok = transcripts.iter().filter(|t| t.success).count();
        results.insert("messages".into(), json!(rows));
        results.insert("successes".into(), json!(ok));
        results.insert("total".into(), json!(transcripts.len()));
        r.check("all_recovered", ok == transcripts.len());
    }

    if eve {
        if p != Protocol::DictionaryFree {
            return Err(Error::InvalidParameter("interception analysis applies to the dictionary-free protocol".into()));
        }
        r = r.param("eve", true);
        let messages: Vec<String> = match message {
            Some(m) if !sweep_all => vec![m.to_owned()],
            _ => (0..1usize << n).map(|m| to_bit_string(n, m)).collect(),
        };
        r.table = Table::new(&["message", "eigenvalues", "pair", "equal_mixture"]);
        let mut rows = Vec::new();
        let mut spectra_ok = true;
        let mut mixtures_ok = true;
        for m in &messages {
            let e = eve_analysis(n, m)?;
            let ev: Vec<f64> = e.eigenvalues.iter().map(|v| sig(v.abs())).collect();
            spectra_ok &= (e.eigenvalues[0] - 0.5).abs() < tol && (e.eigenvalues[1] - 0.5).abs() < tol;
            mixtures_ok &= e.equal_mixture;
            r.table.push(vec![
                m.clone(),
                ev.iter().take(2).map(f64::to_string).collect::<Vec<_>>().join(" "),
                format!("{} {}", e.pair.0, e.pair.1),
                e.equal_mixture.to_string(),
            ]);
            rows.push(json!({ "message": m, "eigenvalues": ev, "pair": [e.pair.0, e.pair.1], "equal_mixture": e.equal_mixture }));
        }
        results.insert("eve".into(), json!(rows));
        results.insert(
            "eve_guess_probability".into(),
            json!({
                "computational": sig(eve_guess_probability(n, EveMeasurement::Computational)?),
                "coupled": sig(eve_guess_probability(n, EveMeasurement::Coupled)?),
            }),
        );
        r.check("eve_spectrum_half_half", spectra_ok);
        r.check("eve_equal_mixture", mixtures_ok);
    }
    r.results = Value::Object(results);
    Ok(r)
}

fn protocol_name(p: ProtocolArg) -> &'static str {
    match p {
        ProtocolArg::Shared => "shared",
        ProtocolArg::Chi => "chi",
        ProtocolArg::DictionaryFree => "dictionary-free",
        ProtocolArg::Traditional => "traditional",
    }
}

/// `Z3` for a single-qubit error, the full word otherwise.
fn error_name(p: &PauliString) -> String {
    if p.weight() == 1 {
        let q = (0..p.num_qubits()).find(|&q| p.letter(q) != Letter::I).expect("weight one");
        format!("{}{}", p.letter(q).symbol(), q + 1)
    } else {
        p.to_string()
    }
}

pub fn stabcode(family: CodeFamily, n: usize, letters: ErrorLetters, tol: f64) -> Result<Report> {
    let cs = code(family, n)?;
    let n = cs.n;
    let gens = stabiliser_generators(&cs)?;
    let mut errors = Vec::new();
    let chosen: &[Letter] = match letters {
        ErrorLetters::X => &[Letter::X],
        ErrorLetters::Y => &[Letter::Y],
        ErrorLetters::Z => &[Letter::Z],
        ErrorLetters::All => &[Letter::Z, Letter::X, Letter::Y],
    };
    for &l in chosen {
        errors.extend(single_qubit_errors(n, l)?);
    }
    let classes = classify_errors_with(&cs, &gens, &errors)?;
    let mut r = Report::new("stabcode").param("code", json!(family)).param("n", n).param("errors", format!("{letters:?}").to_lowercase());
    r.table = Table::new(&["error", "syndrome", "class", "shared"]);
    let mut rows = Vec::new();
    for c in &classes {
        let shared = classes.iter().filter(|o| o.syndrome == c.syndrome).count() > 1 && !c.syndrome.is_zero();
        r.table.push(vec![error_name(&c.error), c.syndrome.to_string(), json_str(json!(c.class)), shared.to_string()]);
        rows.push(json!({ "error": error_name(&c.error), "syndrome": c.syndrome, "class": c.class, "shared": shared }));
    }
    let mut results = serde_json::Map::new();
    results.insert("label".into(), json!(cs.label));
    results.insert("generators".into(), json!(gens.generators));
    results.insert("syndrome_table".into(), json!(rows));
    results.insert("logical".into(), json!(logical_ops(&cs)?));
    r.check("generators_commute", gens.is_abelian());
    r.check("generators_stabilise", gens.stabilises(&cs, tol)?);
    if family == CodeFamily::FiveQubit {
        let rep = five_qubit_code_check()?;
        r.check("five_qubit_check", rep.passes());
        results.insert("five_qubit_check".into(), json!(rep));
    }
    r.results = Value::Object(results);
    Ok(r)
}

fn json_str(v: Value) -> String {
    match v {
        Value::String(s) => s,
        other => other.to_string(),
    }
}

pub fn verify_all(format: Format, tol: &Tolerances) -> Result<(String, bool)> {
    let results = encouple::verify::run_all();
    let passed = results.iter().all(|r| r.passed);
    let mut out = String::new();
    match format {
        Format::Json => {
            for c in &results {
                let line = json!({
                    "command": "verify-all",
                    "criterion": c.id,
                    "name": c.name,
                    "passed": c.passed,
                    "metrics": c.metrics,
                    "detail": c.detail,
                    "tolerances": tolerances(tol),
                });
                out.push_str(&format!("{line}\n"));
            }
            let summary = json!({
                "command": "verify-all",
                "passed": passed,
                "passed_count": results.iter().filter(|r| r.passed).count(),
                "total": results.len(),
                "tolerances": tolerances(tol),
            });
            out.push_str(&format!("{summary}\n"));
        }
        Format::Csv => {
            let mut t = Table::new(&["criterion", "name", "passed", "detail"]);
            for c in &results {
                t.push(vec![c.id.to_string(), c.name.to_string(), c.passed.to_string(), c.detail.clone()]);
            }
            let mut r = Report::new("verify-all");
            r.table = t;
            out = r.render(Format::Csv, tol);
        }
    }
    Ok((out, passed))
}
