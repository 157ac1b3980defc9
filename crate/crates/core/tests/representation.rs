use num_bigint::BigInt;

use covercount::partitions::{
    diagram_stats, dimension_by_syt, factorial, partitions_of, partitions_up_to, DEFAULT_SYT_BOUND,
};
use covercount::symfunc::{
    character_table, character_table_with, principal_specialization, schur,
    DEFAULT_CHARACTER_BOUND,
};
use covercount::{Exec, HPoly, PSeries, Partition, Rat, Window};

#[test]
fn hook_length_dimension_matches_tableau_count() {
    for nu in partitions_up_to(8) {
        let stats = diagram_stats(&nu);
        assert_eq!(dimension_by_syt(&nu, DEFAULT_SYT_BOUND).unwrap(), stats.dim, "{nu}");
    }
}

#[test]
fn characters_are_orthonormal() {
    for n in 1..=6 {
        let table = character_table(n, DEFAULT_CHARACTER_BOUND).unwrap();
        let shapes = &table.partitions;
        for a in shapes {
            for b in shapes {
                let inner = shapes.iter().fold(Rat::zero(), |acc, mu| {
                    let z = diagram_stats(mu).z;
                    acc + Rat::new(BigInt::from(table.get(a, mu) * table.get(b, mu)), BigInt::from(z))
                });
                let expect = if a == b { Rat::one() } else { Rat::zero() };
                assert_eq!(inner, expect, "rows {a} and {b}");
            }
        }
        for mu in shapes {
            for nu in shapes {
                let col: i64 = shapes.iter().map(|l| table.get(l, mu) * table.get(l, nu)).sum();
                let expect = if mu == nu { diagram_stats(mu).z as i64 } else { 0 };
                assert_eq!(col, expect, "columns {mu} and {nu}");
            }
        }
    }
}

#[test]
fn character_table_first_rows() {
    let table = character_table(4, DEFAULT_CHARACTER_BOUND).unwrap();
    let trivial = Partition::row(4);
    let sign = Partition::column(4);
    for mu in &table.partitions {
        assert_eq!(table.get(&trivial, mu), 1);
        let parity = if (4 - mu.len()) % 2 == 0 { 1 } else { -1 };
        assert_eq!(table.get(&sign, mu), parity);
        assert_eq!(table.get(mu, &Partition::column(4)), diagram_stats(mu).dim as i64);
    }
    assert_eq!(table, character_table_with(4, DEFAULT_CHARACTER_BOUND, Exec::Serial).unwrap());
}

#[test]
fn dimension_weighted_schur_sum_is_p1_power() {
    for n in 1..=6 {
        let mut total = PSeries::zero(n);
        for nu in partitions_of(n) {
            let dim = Rat::from_integer(BigInt::from(diagram_stats(&nu).dim));
            total = total.add(&schur(&nu).scale(&dim));
        }
        let expect = PSeries::monomial(
            Partition::column(n),
            HPoly::one(Window::EXACT),
            n,
        );
        assert_eq!(total, expect, "n = {n}");
    }
}

#[test]
fn hook_content_formula() {
    for nu in partitions_up_to(6) {
        let stats = diagram_stats(&nu);
        let hooks: u128 = stats.hooks.iter().map(|&h| h as u128).product();
        for n_vars in 0..=5u64 {
            let numer = stats
                .contents
                .iter()
                .fold(BigInt::from(1), |acc, &c| acc * BigInt::from(n_vars as i64 + c));
            let expect = Rat::new(numer, BigInt::from(hooks));
            assert_eq!(principal_specialization(&nu, n_vars), expect, "{nu} at N = {n_vars}");
        }
    }
}

#[test]
fn factorial_matches_class_sizes() {
    for n in 1..=7 {
        let total: u128 = partitions_of(n).iter().map(|mu| diagram_stats(mu).class_size).sum();
        assert_eq!(total, factorial(n));
        let squares: u128 = partitions_of(n).iter().map(|nu| diagram_stats(nu).dim.pow(2)).sum();
        assert_eq!(squares, factorial(n));
    }
}
