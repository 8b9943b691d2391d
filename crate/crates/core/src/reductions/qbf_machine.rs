//! One fixed bounded machine deciding encoded QBF instances. The input word
//! has four regions separated by `hash`: assignment bits, a postfix matrix
//! encoding with unary variable indices, a value-stack scratch region, and
//! per-quantifier accumulator flags. The machine enumerates assignments in
//! increment order, folding each matrix value through the quantifier flags
//! carry-style, and accepts iff the outermost flag ends true.

use std::sync::OnceLock;

use super::{BoolExpr, Qbf, Quantifier};
use crate::eval::{k_accepts, Verdict};
use crate::error::EvalError;
use crate::syntax::Program;
use crate::tm::{BoundedTm, Move, TmBuilder};
use crate::tmbridge::compile_tm_to_msc;

/// Ground-truth QBF evaluation by recursive quantifier expansion.
pub fn eval_qbf(q: &Qbf) -> bool {
    fn rec(prefix: &[(Quantifier, String)], matrix: &BoolExpr, assign: &mut Vec<(String, bool)>) -> bool {
        match prefix.first() {
            None => matrix.eval(&|x: &str| {
                assign
                    .iter()
                    .find(|(y, _)| y == x)
                    .map(|(_, b)| *b)
                    .unwrap_or(false)
            }),
            Some((q, x)) => {
                let mut results = [false, false];
                for (i, b) in [false, true].into_iter().enumerate() {
                    assign.push((x.clone(), b));
                    results[i] = rec(&prefix[1..], matrix, assign);
                    assign.pop();
                }
                match q {
                    Quantifier::Forall => results[0] && results[1],
                    Quantifier::Exists => results[0] || results[1],
                }
            }
        }
    }
    rec(&q.prefix, &q.matrix, &mut Vec::new())
}

// Tape symbol names. Marked variants carry a trailing `X` (consumed tokens)
// or `d` (position dots).
const BITS: [&str; 2] = ["0", "1"];
const TOKENS: [&str; 7] = ["v", "u", "t", "f", "not", "and", "or"];
const FLAGS: [&str; 4] = ["A0", "A1", "E0", "E1"];

fn consumed(tok: &str) -> String {
    format!("{tok}X")
}
fn dotted(sym: &str) -> String {
    format!("{sym}d")
}

/// The fixed machine. Identical for every instance; built once.
pub fn qbf_machine() -> &'static BoundedTm {
    static MACHINE: OnceLock<BoundedTm> = OnceLock::new();
    MACHINE.get_or_init(build_machine)
}

fn build_machine() -> BoundedTm {
    let mut input: Vec<String> = vec!["0".into(), "hash".into(), "s".into()];
    input.extend(TOKENS.iter().map(|t| t.to_string()));
    input.push("A1".into());
    input.push("E0".into());
    let input_refs: Vec<&str> = input.iter().map(|s| s.as_str()).collect();
    let mut b = TmBuilder::new(0, &input_refs);
    // Tape-only symbols.
    for extra in ["1", "A0", "E1"] {
        b.symbols.push(extra.to_string());
    }
    for t in TOKENS {
        b.symbols.push(consumed(t));
    }
    for s in ["0", "1"] {
        b.symbols.push(dotted(s));
    }
    for f in FLAGS {
        b.symbols.push(dotted(f));
    }
    b.start = "reset0".into();
    b.accepting = vec!["yes".into()];
    b.rejecting = vec!["no".into()];

    let flag_type = |f: &str| f.as_bytes()[0];
    let flag_val = |f: &str| f.ends_with('1');
    let flag_of = |t: u8, v: bool| -> String {
        format!("{}{}", t as char, if v { "1" } else { "0" })
    };
    let neutral = |t: u8| flag_of(t, t == b'A');

    // reset0: walk w1 (bits untouched) to the first separator.
    for s in BITS {
        b.rule("reset0", s, "reset0", s, Move::Right);
    }
    b.rule("reset0", "L", "reset0", "L", Move::Right);
    b.rule("reset0", "hash", "reset1", "hash", Move::Right);
    // reset1: unconsume w2 tokens.
    for t in TOKENS {
        b.rule("reset1", t, "reset1", t, Move::Right);
        let c = consumed(t);
        b.rule("reset1", &c, "reset1", t, Move::Right);
    }
    b.rule("reset1", "hash", "reset2", "hash", Move::Right);
    // reset2: clear the stack region.
    for s in ["0", "1", "s"] {
        b.rule("reset2", s, "reset2", "s", Move::Right);
    }
    b.rule("reset2", "hash", "tofetch", "hash", Move::Left);
    // tofetch: left through w3 and w2 to the first separator, then fetch.
    // Seen separators are counted down: tofetch (inside w3), tofetch1 (w2).
    for s in ["0", "1", "s"] {
        b.rule("tofetch", s, "tofetch", s, Move::Left);
    }
    b.rule("tofetch", "hash", "tofetch1", "hash", Move::Left);
    for t in TOKENS {
        b.rule("tofetch1", t, "tofetch1", t, Move::Left);
        let c = consumed(t);
        b.rule("tofetch1", &c, "tofetch1", &c, Move::Left);
    }
    b.rule("tofetch1", "hash", "fetch", "hash", Move::Right);

    // fetch: first unconsumed token of w2.
    for t in TOKENS {
        let c = consumed(t);
        b.rule("fetch", &c, "fetch", &c, Move::Right);
    }
    b.rule("fetch", "t", "push_1", &consumed("t"), Move::Right);
    b.rule("fetch", "f", "push_0", &consumed("f"), Move::Right);
    b.rule("fetch", "v", "useek", &consumed("v"), Move::Right);
    b.rule("fetch", "not", "negseek", &consumed("not"), Move::Right);
    b.rule("fetch", "and", "opseek_and", &consumed("and"), Move::Right);
    b.rule("fetch", "or", "opseek_or", &consumed("or"), Move::Right);
    // w2 exhausted: read the result off the stack.
    b.rule("fetch", "hash", "finread", "hash", Move::Right);

    // push_b: rightward to the first empty stack slot, write b.
    for bit in BITS {
        let st = format!("push_{bit}");
        for t in TOKENS {
            let c = consumed(t);
            b.rule(&st, t, &st, t, Move::Right);
            b.rule(&st, &c, &st, &c, Move::Right);
        }
        b.rule(&st, "hash", &st, "hash", Move::Right);
        for v in BITS {
            b.rule(&st, v, &st, v, Move::Right);
        }
        b.rule(&st, "s", "ret0", bit, Move::Left);
    }
    // ret0/ret1: back left to the start of w2 (two separators), then fetch.
    for s in ["0", "1", "s"] {
        b.rule("ret0", s, "ret0", s, Move::Left);
    }
    b.rule("ret0", "hash", "ret1", "hash", Move::Left);
    for t in TOKENS {
        let c = consumed(t);
        b.rule("ret1", t, "ret1", t, Move::Left);
        b.rule("ret1", &c, "ret1", &c, Move::Left);
    }
    b.rule("ret1", "hash", "fetch", "hash", Move::Right);

    // Variable tokens: consume the unary marks one by one, advancing a dot
    // across the assignment bits; then read the dotted bit.
    b.rule("useek", "u", "advdot", &consumed("u"), Move::Left);
    // Next token is not a u (or w2 ended): the dot sits on the variable.
    for t in ["v", "t", "f", "not", "and", "or"] {
        b.rule("useek", t, "readdot", t, Move::Left);
    }
    b.rule("useek", "hash", "readdot", "hash", Move::Left);
    for t in TOKENS {
        let c = consumed(t);
        b.rule("useek", &c, "useek", &c, Move::Right);
    }
    // advdot: left to the current dot (or the left marker), move it right.
    for t in TOKENS {
        let c = consumed(t);
        b.rule("advdot", t, "advdot", t, Move::Left);
        b.rule("advdot", &c, "advdot", &c, Move::Left);
    }
    b.rule("advdot", "hash", "advdot", "hash", Move::Left);
    for s in BITS {
        b.rule("advdot", s, "advdot", s, Move::Left);
        let d = dotted(s);
        // Undot and step right to dot the next bit.
        b.rule("advdot", &d, "dotnext", s, Move::Right);
    }
    b.rule("advdot", "L", "dotnext", "L", Move::Right);
    for s in BITS {
        b.rule("dotnext", s, "backtoken", &dotted(s), Move::Right);
    }
    // backtoken: right to the next unconsumed token, continuing the unary
    // count or finishing it.
    for s in BITS {
        b.rule("backtoken", s, "backtoken", s, Move::Right);
    }
    b.rule("backtoken", "hash", "useek2", "hash", Move::Right);
    for t in TOKENS {
        let c = consumed(t);
        b.rule("useek2", &c, "useek2", &c, Move::Right);
    }
    b.rule("useek2", "u", "advdot", &consumed("u"), Move::Left);
    for t in ["v", "t", "f", "not", "and", "or"] {
        b.rule("useek2", t, "readdot", t, Move::Left);
    }
    b.rule("useek2", "hash", "readdot", "hash", Move::Left);
    // readdot: left to the dotted bit, read and undot it, then push.
    for t in TOKENS {
        let c = consumed(t);
        b.rule("readdot", t, "readdot", t, Move::Left);
        b.rule("readdot", &c, "readdot", &c, Move::Left);
    }
    b.rule("readdot", "hash", "readdot", "hash", Move::Left);
    for s in BITS {
        b.rule("readdot", s, "readdot", s, Move::Left);
        b.rule("readdot", &dotted(s), &format!("push_{s}"), s, Move::Right);
    }

    // Negation: flip the rightmost stack value.
    for t in TOKENS {
        let c = consumed(t);
        b.rule("negseek", t, "negseek", t, Move::Right);
        b.rule("negseek", &c, "negseek", &c, Move::Right);
    }
    b.rule("negseek", "hash", "negin", "hash", Move::Right);
    for s in BITS {
        b.rule("negin", s, "negin", s, Move::Right);
    }
    b.rule("negin", "s", "negflip", "s", Move::Left);
    b.rule("negin", "hash", "negflip", "hash", Move::Left);
    b.rule("negflip", "0", "ret0", "1", Move::Left);
    b.rule("negflip", "1", "ret0", "0", Move::Left);

    // Binary operators: pop the two rightmost values, push the result.
    for op in ["and", "or"] {
        let seek = format!("opseek_{op}");
        let inside = format!("opin_{op}");
        for t in TOKENS {
            let c = consumed(t);
            b.rule(&seek, t, &seek, t, Move::Right);
            b.rule(&seek, &c, &seek, &c, Move::Right);
        }
        b.rule(&seek, "hash", &inside, "hash", Move::Right);
        for s in BITS {
            b.rule(&inside, s, &inside, s, Move::Right);
        }
        let pop2 = format!("oppop2_{op}");
        b.rule(&inside, "s", &pop2, "s", Move::Left);
        b.rule(&inside, "hash", &pop2, "hash", Move::Left);
        for b2 in [false, true] {
            let pop1 = format!("oppop1_{op}_{}", u8::from(b2));
            b.rule(&pop2, BITS[usize::from(b2)], &pop1, "s", Move::Left);
            for b1 in [false, true] {
                let res = match op {
                    "and" => b1 && b2,
                    _ => b1 || b2,
                };
                b.rule(&pop1, BITS[usize::from(b1)], "ret0", BITS[usize::from(res)], Move::Stay);
            }
        }
    }

    // finread: the single remaining stack value is the matrix value; erase
    // it so only assignment bits remain on the tape.
    for v in [false, true] {
        let res = format!("reschk_{}", u8::from(v));
        b.rule("finread", BITS[usize::from(v)], &res, "s", Move::Left);
        // reschk: left towards w1; a bit means quantifiers exist, the left
        // marker means the matrix was closed without quantifiers.
        b.rule(&res, "hash", &res, "hash", Move::Left);
        for t in TOKENS {
            let c = consumed(t);
            b.rule(&res, t, &res, t, Move::Left);
            b.rule(&res, &c, &res, &c, Move::Left);
        }
        for s in BITS {
            b.rule(&res, s, &format!("foldn_{}", u8::from(v)), s, Move::Right);
        }
        b.rule(&res, "L", if v { "yes" } else { "no" }, "L", Move::Stay);
        // foldn: rightward to the end, then fold into the last flag.
        let fold = format!("foldn_{}", u8::from(v));
        for s in ["0", "1", "s", "hash"] {
            b.rule(&fold, s, &fold, s, Move::Right);
        }
        for t in TOKENS {
            let c = consumed(t);
            b.rule(&fold, t, &fold, t, Move::Right);
            b.rule(&fold, &c, &fold, &c, Move::Right);
        }
        for f in FLAGS {
            b.rule(&fold, f, &fold, f, Move::Right);
        }
        b.rule(&fold, "R", &format!("foldlast_{}", u8::from(v)), "R", Move::Left);
        // foldlast: combine the value into the rightmost flag and dot it.
        let last = format!("foldlast_{}", u8::from(v));
        for f in FLAGS {
            let t = flag_type(f);
            let merged = match t {
                b'A' => flag_val(f) && v,
                _ => flag_val(f) || v,
            };
            b.rule(&last, f, "carryto", &dotted(&flag_of(t, merged)), Move::Left);
        }
    }

    // carryto: left to the rightmost assignment bit and dot it. The stack
    // region holds no bits here (finread erased the result), so the first
    // bit met from the right is w1's last cell.
    for f in FLAGS {
        b.rule("carryto", f, "carryto", f, Move::Left);
    }
    for s in ["s", "hash"] {
        b.rule("carryto", s, "carryto", s, Move::Left);
    }
    for t in TOKENS {
        let c = consumed(t);
        b.rule("carryto", t, "carryto", t, Move::Left);
        b.rule("carryto", &c, "carryto", &c, Move::Left);
    }
    for s in BITS {
        b.rule("carryto", s, "carry", &dotted(s), Move::Stay);
    }

    // carry: at a dotted assignment bit.
    b.rule("carry", &dotted("1"), "foldright", &dotted("0"), Move::Right);
    b.rule("carry", &dotted("0"), "cleandot", "1", Move::Right);
    // foldright: right to the dotted flag.
    for s in ["0", "1", "s", "hash"] {
        b.rule("foldright", s, "foldright", s, Move::Right);
    }
    for t in TOKENS {
        let c = consumed(t);
        b.rule("foldright", t, "foldright", t, Move::Right);
        b.rule("foldright", &c, "foldright", &c, Move::Right);
    }
    for f in FLAGS {
        b.rule("foldright", f, "foldright", f, Move::Right);
        // Read the dotted flag's value, reset it to neutral, fold left.
        let d = dotted(f);
        let v = flag_val(f);
        b.rule(
            "foldright",
            &d,
            &format!("foldapply_{}", u8::from(v)),
            &neutral(flag_type(f)),
            Move::Left,
        );
    }
    for v in [false, true] {
        let apply = format!("foldapply_{}", u8::from(v));
        for f in FLAGS {
            let t = flag_type(f);
            let merged = match t {
                b'A' => flag_val(f) && v,
                _ => flag_val(f) || v,
            };
            b.rule(&apply, f, "carryback", &dotted(&flag_of(t, merged)), Move::Left);
        }
        // No flag to the left: the outermost quantifier just finished.
        b.rule(&apply, "hash", if v { "yes" } else { "no" }, "hash", Move::Stay);
    }
    // carryback: left to the dotted bit, shift the dot one cell left.
    for s in ["0", "1", "s", "hash"] {
        b.rule("carryback", s, "carryback", s, Move::Left);
    }
    for t in TOKENS {
        let c = consumed(t);
        b.rule("carryback", t, "carryback", t, Move::Left);
        b.rule("carryback", &c, "carryback", &c, Move::Left);
    }
    for f in FLAGS {
        b.rule("carryback", f, "carryback", f, Move::Left);
    }
    b.rule("carryback", &dotted("0"), "dotleft", "0", Move::Left);
    b.rule("carryback", &dotted("1"), "dotleft", "1", Move::Left);
    for s in BITS {
        b.rule("dotleft", s, "carry", &dotted(s), Move::Stay);
    }
    // cleandot: increment done; undot the flag and restart the evaluation.
    for s in ["0", "1", "s", "hash"] {
        b.rule("cleandot", s, "cleandot", s, Move::Right);
    }
    for t in TOKENS {
        let c = consumed(t);
        b.rule("cleandot", t, "cleandot", t, Move::Right);
        b.rule("cleandot", &c, "cleandot", &c, Move::Right);
    }
    for f in FLAGS {
        b.rule("cleandot", f, "cleandot", f, Move::Right);
        b.rule("cleandot", &dotted(f), "restart", f, Move::Left);
    }
    // restart: all the way left, then rescan.
    for f in FLAGS {
        b.rule("restart", f, "restart", f, Move::Left);
    }
    for s in ["0", "1", "s", "hash"] {
        b.rule("restart", s, "restart", s, Move::Left);
    }
    for t in TOKENS {
        let c = consumed(t);
        b.rule("restart", t, "restart", t, Move::Left);
        b.rule("restart", &c, "restart", &c, Move::Left);
    }
    b.rule("restart", "L", "reset0", "L", Move::Right);

    b.state("yes");
    b.state("no");
    b.build().expect("fixed machine is valid")
}

/// Encode a closed QBF into an input word for the fixed machine.
pub fn qbf_to_lba(q: &Qbf) -> (Vec<String>, &'static BoundedTm) {
    let n = q.prefix.len();
    let index_of = |x: &str| -> usize {
        q.prefix
            .iter()
            .position(|(_, y)| y == x)
            .expect("validated closed QBF")
            + 1
    };

    fn postfix(e: &BoolExpr, index_of: &dyn Fn(&str) -> usize, out: &mut Vec<String>) {
        match e {
            BoolExpr::True => out.push("t".into()),
            BoolExpr::False => out.push("f".into()),
            BoolExpr::Var(x) => {
                out.push("v".into());
                for _ in 0..index_of(x) {
                    out.push("u".into());
                }
            }
            BoolExpr::Not(c) => {
                postfix(c, index_of, out);
                out.push("not".into());
            }
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) => {
                postfix(a, index_of, out);
                postfix(b, index_of, out);
                out.push(if matches!(e, BoolExpr::And(_, _)) {
                    "and".into()
                } else {
                    "or".into()
                });
            }
        }
    }

    fn stack_depth(e: &BoolExpr) -> usize {
        match e {
            BoolExpr::True | BoolExpr::False | BoolExpr::Var(_) => 1,
            BoolExpr::Not(c) => stack_depth(c),
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) => stack_depth(a).max(stack_depth(b) + 1),
        }
    }

    let mut word: Vec<String> = Vec::new();
    word.extend(std::iter::repeat("0".to_string()).take(n));
    word.push("hash".into());
    postfix(&q.matrix, &index_of, &mut word);
    word.push("hash".into());
    word.extend(std::iter::repeat("s".to_string()).take(stack_depth(&q.matrix)));
    word.push("hash".into());
    for (quant, _) in &q.prefix {
        word.push(match quant {
            Quantifier::Forall => "A1".into(),
            Quantifier::Exists => "E0".into(),
        });
    }
    (word, qbf_machine())
}

/// The compiled form of the fixed machine, shared by every pipeline run.
pub fn qbf_program() -> &'static Program {
    static PROGRAM: OnceLock<Program> = OnceLock::new();
    PROGRAM.get_or_init(|| compile_tm_to_msc(qbf_machine()))
}

/// End-to-end check through the word model: encode, compile the fixed
/// machine, and evaluate the program on the word's extended model.
pub fn qbf_to_msc_pipeline(q: &Qbf) -> Result<bool, EvalError> {
    let (word, tm) = qbf_to_lba(q);
    let program = qbf_program();
    match k_accepts(program, &word, tm.bound, None)? {
        Verdict::AcceptedAt(_) => Ok(true),
        _ => Ok(false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::parse_qbf;
    use crate::tm::{run_tm, TmOutcome};

    fn machine_says(q: &Qbf) -> bool {
        let (word, tm) = qbf_to_lba(q);
        match run_tm(tm, &word, Some(2_000_000)).unwrap() {
            TmOutcome::Accept(_) => true,
            TmOutcome::Reject(_) => false,
            TmOutcome::NonHalting(_) => panic!("machine must halt on encoded instances"),
        }
    }

    #[test]
    fn basic_instances() {
        for (src, want) in [
            ("forall x\nmatrix x\n", false),
            ("exists x\nmatrix x\n", true),
            ("exists x\nmatrix !x\n", true),
            ("forall x\nmatrix x | !x\n", true),
            ("forall x\nexists y\nmatrix (x & y) | (!x & !y)\n", true),
            ("exists x\nforall y\nmatrix (x & y) | (!x & !y)\n", false),
            ("matrix T\n", true),
            ("matrix F & T\n", false),
        ] {
            let q = parse_qbf(src, "t.qbf").unwrap();
            assert_eq!(eval_qbf(&q), want, "oracle on {src}");
            assert_eq!(machine_says(&q), want, "machine on {src}");
        }
    }

    #[test]
    fn machine_description_is_constant() {
        let q1 = parse_qbf("forall x\nmatrix x\n", "t.qbf").unwrap();
        let q2 = parse_qbf("exists a\nexists b\nmatrix a & b\n", "t.qbf").unwrap();
        let (_, m1) = qbf_to_lba(&q1);
        let (_, m2) = qbf_to_lba(&q2);
        let d1 = crate::textio::serialize_tm(m1);
        let d2 = crate::textio::serialize_tm(m2);
        assert_eq!(d1, d2);
    }
}
