use super::{PushdownSystem, StateId, SystemError, Transition};
use crate::stack::{StackOp, Symbol};

fn err(line: usize, message: impl Into<String>) -> SystemError {
    SystemError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_op(
    word: &str,
    arg: Option<&str>,
    line: usize,
    sys_symbol: &dyn Fn(&str) -> Option<Symbol>,
) -> Result<StackOp, SystemError> {
    if word == "push" {
        let name = arg.ok_or_else(|| err(line, "push needs a symbol"))?;
        let sym = sys_symbol(name).ok_or_else(|| err(line, format!("undeclared symbol `{name}`")))?;
        return Ok(StackOp::Push(sym));
    }
    if arg.is_some() {
        return Err(err(line, format!("unexpected argument after `{word}`")));
    }
    let (kind, digits) = if let Some(d) = word.strip_prefix("pop") {
        ("pop", d)
    } else if let Some(d) = word.strip_prefix("clone") {
        ("clone", d)
    } else {
        return Err(err(line, format!("unknown operation `{word}`")));
    };
    let k: u8 = digits
        .parse()
        .map_err(|_| err(line, format!("bad level in `{word}`")))?;
    Ok(if kind == "pop" {
        StackOp::Pop(k)
    } else {
        StackOp::Clone(k)
    })
}

/// Parses the line-oriented system format.
pub fn parse_system(text: &str) -> Result<PushdownSystem, SystemError> {
    let mut level: Option<u8> = None;
    let mut bottom: Option<(String, usize)> = None;
    let mut alphabet: Option<Vec<String>> = None;
    let mut states: Option<Vec<String>> = None;
    let mut initial: Option<(String, usize)> = None;
    let mut delta_lines: Vec<(usize, String)> = Vec::new();
    let mut in_delta = false;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if in_delta && line.contains("->") {
            delta_lines.push((line_no, line.to_string()));
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| err(line_no, format!("expected `key: value`, found `{line}`")))?;
        let value = value.trim();
        let dup = |present: bool| {
            if present {
                Err(err(line_no, format!("duplicate `{}` line", key.trim())))
            } else {
                Ok(())
            }
        };
        match key.trim() {
            "level" => {
                dup(level.is_some())?;
                level = Some(value.parse().map_err(|_| err(line_no, "level must be 1 or 2"))?);
            }
            "bottom" => {
                dup(bottom.is_some())?;
                bottom = Some((value.to_string(), line_no));
            }
            "alphabet" => {
                dup(alphabet.is_some())?;
                alphabet = Some(value.split_whitespace().map(String::from).collect());
            }
            "states" => {
                dup(states.is_some())?;
                states = Some(value.split_whitespace().map(String::from).collect());
            }
            "initial" => {
                dup(initial.is_some())?;
                initial = Some((value.to_string(), line_no));
            }
            "delta" => {
                dup(in_delta)?;
                if !value.is_empty() {
                    return Err(err(line_no, "transitions go on the lines after `delta:`"));
                }
                in_delta = true;
            }
            other => return Err(err(line_no, format!("unknown key `{other}`"))),
        }
    }

    let end = last_line + 1;
    let level = level.ok_or_else(|| err(end, "missing `level:` line"))?;
    let alphabet = alphabet.ok_or_else(|| err(end, "missing `alphabet:` line"))?;
    let states = states.ok_or_else(|| err(end, "missing `states:` line"))?;
    let (bottom_name, bottom_line) = bottom.ok_or_else(|| err(end, "missing `bottom:` line"))?;
    let (initial_name, initial_line) = initial.ok_or_else(|| err(end, "missing `initial:` line"))?;
    if !in_delta {
        return Err(err(end, "missing `delta:` section"));
    }
    for (names, what) in [(&alphabet, "symbol"), (&states, "state")] {
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(err(end, format!("{what} `{n}` declared twice")));
            }
        }
    }
    let sym = |n: &str| alphabet.iter().position(|a| a == n).map(|i| Symbol(i as u16));
    let state = |n: &str| states.iter().position(|a| a == n).map(|i| StateId(i as u16));
    let bottom =
        sym(&bottom_name).ok_or_else(|| err(bottom_line, format!("bottom `{bottom_name}` is not in the alphabet")))?;
    let initial =
        state(&initial_name).ok_or_else(|| err(initial_line, format!("undeclared state `{initial_name}`")))?;

    let mut transitions = Vec::with_capacity(delta_lines.len());
    for (line_no, line) in &delta_lines {
        let line_no = *line_no;
        let (lhs, rhs) = line.split_once("->").expect("checked above");
        let lhs: Vec<&str> = lhs.split_whitespace().collect();
        let rhs: Vec<&str> = rhs.split_whitespace().collect();
        if lhs.len() != 2 || !(rhs.len() == 2 || rhs.len() == 3) {
            return Err(err(line_no, "expected `state symbol -> state op [symbol]`"));
        }
        let from = state(lhs[0]).ok_or_else(|| err(line_no, format!("undeclared state `{}`", lhs[0])))?;
        let symbol = sym(lhs[1]).ok_or_else(|| err(line_no, format!("undeclared symbol `{}`", lhs[1])))?;
        let to = state(rhs[0]).ok_or_else(|| err(line_no, format!("undeclared state `{}`", rhs[0])))?;
        let op = parse_op(rhs[1], rhs.get(2).copied(), line_no, &sym)?;
        if !op.valid_at(level) {
            return Err(err(line_no, format!("operation not available at level {level}")));
        }
        if op == StackOp::Push(bottom) {
            return Err(err(line_no, "the bottom symbol cannot be pushed"));
        }
        transitions.push(Transition { from, symbol, to, op });
    }

    PushdownSystem::new(level, alphabet, bottom, states, initial, transitions).map_err(|e| match e {
        SystemError::Invalid(m) | SystemError::Capacity(m) => err(end, m),
        other => other,
    })
}

/// Canonical text form; `parse_system(serialize_system(s)) == s`.
pub fn serialize_system(sys: &PushdownSystem) -> String {
    let mut out = String::new();
    out.push_str(&format!("level: {}\n", sys.level()));
    out.push_str(&format!("bottom: {}\n", sys.symbol_name(sys.bottom())));
    out.push_str(&format!("alphabet: {}\n", sys.alphabet().join(" ")));
    out.push_str(&format!("states: {}\n", sys.states().join(" ")));
    out.push_str(&format!("initial: {}\n", sys.state_name(sys.initial_state())));
    out.push_str("delta:\n");
    for t in sys.transitions() {
        out.push_str(&format!(
            "  {} {} -> {} {}\n",
            sys.state_name(t.from),
            sys.symbol_name(t.symbol),
            sys.state_name(t.to),
            sys.format_op(t.op)
        ));
    }
    out
}

/// Reads comma-separated transition indices, e.g. `0,1,3`. The empty string is the empty run.
pub fn parse_run_indices(text: &str) -> Result<Vec<usize>, SystemError> {
    let text = text.trim();
    if text.is_empty() || text == "-" {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| err(1, format!("bad transition index `{}`", p.trim())))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::testing::{FIG1, LEVEL1, MIXED};

    #[test]
    fn fig1_parses() {
        let sys = parse_system(FIG1).unwrap();
        assert_eq!(sys.level(), 2);
        assert_eq!(sys.num_states(), 3);
        assert_eq!(sys.transitions().len(), 4);
        assert_eq!(sys.transitions()[3].op, StackOp::Pop(2));
    }

    #[test]
    fn canonical_form_is_a_fixpoint() {
        for text in [FIG1, LEVEL1, MIXED] {
            let sys = parse_system(text).unwrap();
            let once = serialize_system(&sys);
            let again = parse_system(&once).unwrap();
            assert_eq!(again, sys);
            assert_eq!(serialize_system(&again), once);
        }
    }

    #[test]
    fn malformed_inputs_report_lines() {
        let missing = FIG1.replace("initial: q0", "");
        assert!(matches!(parse_system(&missing), Err(SystemError::Parse { .. })));
        let bad_state = FIG1.replace("q1 a -> q2 pop2", "q1 a -> q9 pop2");
        match parse_system(&bad_state) {
            Err(SystemError::Parse { line, message }) => {
                assert_eq!(line, 11);
                assert!(message.contains("q9"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let level1_clone = LEVEL1.replace("p0 _ -> p0 push a", "p0 _ -> p0 clone2");
        assert!(parse_system(&level1_clone).is_err());
    }

    #[test]
    fn run_indices() {
        assert_eq!(parse_run_indices("0,1,3").unwrap(), vec![0, 1, 3]);
        assert_eq!(parse_run_indices("").unwrap(), Vec::<usize>::new());
        assert!(parse_run_indices("0,x").is_err());
    }
}
