mod support;

use grapevine::graph::PropertyGraph;
use grapevine::query::parse;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use support::{random_graph, random_transaction, IdSource};

fn node() -> impl Strategy<Value = String> {
    (
        prop::option::of(prop::sample::select(vec!["a", "b", "c", "d"])),
        prop::option::of(prop::sample::select(vec!["Post", "Comm", "Person"])),
    )
        .prop_map(|(v, l)| {
            let mut s = String::from("(");
            s.push_str(v.unwrap_or(""));
            if let Some(l) = l {
                s.push(':');
                s.push_str(l);
            }
            s.push(')');
            s
        })
}

fn rel() -> impl Strategy<Value = String> {
    (
        prop::option::of(prop::sample::select(vec!["REPLY", "KNOWS"])),
        prop::option::of((0u32..3, prop::option::of(1u32..4))),
    )
        .prop_map(|(ty, len)| {
            let mut s = String::from("-[");
            if let Some(ty) = ty {
                s.push(':');
                s.push_str(ty);
            }
            match len {
                None => {}
                Some((0, None)) => s.push('*'),
                Some((min, max)) => {
                    s.push_str(&format!("*{min}.."));
                    if let Some(max) = max {
                        s.push_str(&(min + max).to_string());
                    }
                }
            }
            s.push_str("]->");
            s
        })
}

/// Query text that may or may not be valid: variables can be unbound or
/// repeated, which the parser has to report rather than panic on.
fn query_text() -> impl Strategy<Value = String> {
    (
        node(),
        prop::collection::vec((rel(), node()), 0..3),
        prop::option::of((
            prop::sample::select(vec!["a", "b", "c"]),
            prop::sample::select(vec!["=", "<>", "<", ">="]),
            prop::sample::select(vec!["'en'", "3", "2.5", "true"]),
        )),
        prop::sample::select(vec!["a", "b", "a, b.lang", "c.age AS x"]),
    )
        .prop_map(|(first, hops, cond, ret)| {
            let mut s = format!("MATCH {first}");
            for (r, n) in hops {
                s.push_str(&r);
                s.push_str(&n);
            }
            if let Some((v, op, lit)) = cond {
                s.push_str(&format!(" WHERE {v}.lang {op} {lit}"));
            }
            s.push_str(" RETURN ");
            s.push_str(ret);
            s
        })
}

fn sorted(mut rows: Vec<Vec<grapevine::value::Value>>) -> Vec<Vec<grapevine::value::Value>> {
    rows.sort();
    rows
}

proptest! {
    #[test]
    fn parser_is_total(text in "\\PC{0,80}") {
        let _ = parse(&text);
    }

    #[test]
    fn parser_is_total_on_cypher_tokens(
        tokens in prop::collection::vec(
            prop::sample::select(vec![
                "MATCH", "WHERE", "RETURN", "AS", "AND", "(", ")", "[", "]", "-", "->",
                "<-", "*", "..", ":", "=", "<>", "<", ".", ",", "a", "Post", "'x'", "1", "{",
            ]),
            0..30,
        )
    ) {
        let _ = parse(&tokens.join(" "));
    }

    #[test]
    fn printing_round_trips(text in query_text()) {
        if let Ok(q) = parse(&text) {
            let printed = q.to_string();
            prop_assert_eq!(parse(&printed).unwrap(), q);
        }
    }

    #[test]
    fn errors_point_into_the_text(text in query_text()) {
        if let Err(e) = parse(&text) {
            let (line, column) = e.position();
            prop_assert_eq!(line, 1);
            prop_assert!(column >= 1 && column <= text.chars().count() + 1);
        }
    }

    #[test]
    fn relations_match_a_rebuilt_graph(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut graph = random_graph(&mut rng, 20, 30);
        let mut ids = IdSource(10_000);
        for _ in 0..4 {
            let tx = random_transaction(&mut rng, &graph, &mut ids, 10);
            graph.apply_transaction(&tx).unwrap();
        }
        let rebuilt = PropertyGraph::from_records(
            graph.vertices().cloned(),
            graph.edges().cloned(),
        )
        .unwrap();
        prop_assert_eq!(sorted(graph.alpha_relation()), sorted(rebuilt.alpha_relation()));
        prop_assert_eq!(sorted(graph.beta_relation()), sorted(rebuilt.beta_relation()));
    }

    #[test]
    fn inverse_restores_the_graph(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut graph = random_graph(&mut rng, 20, 30);
        let before = graph.clone();
        let mut ids = IdSource(10_000);
        let tx = random_transaction(&mut rng, &graph, &mut ids, 15);
        let (_, inverse) = graph.apply_transaction_logged(&tx).unwrap();
        graph.apply_transaction(&inverse).unwrap();
        prop_assert!(graph == before);
    }
}
