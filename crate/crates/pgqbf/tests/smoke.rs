// Fast end-to-end sanity checks of the encode → evaluate pipeline against
// the game-tree oracle, on the smallest interesting games.

use pgqbf::encode::{encode, EncodeOptions, EncodingVariant, FirstmovesMode};
use pgqbf::gens;
use pgqbf::oracle::{solve_game, solve_qbf, GameLimits, QbfLimits, Verdict};

fn game_verdict(spec: &pgqbf::GameSpec, depth: Option<usize>) -> Verdict {
    solve_game(spec, depth, &GameLimits::default()).unwrap().verdict
}

fn cor_verdict(spec: &pgqbf::GameSpec, depth: Option<usize>) -> Verdict {
    let opts = EncodeOptions {
        depth_override: depth,
        firstmoves: FirstmovesMode::Off,
        ..EncodeOptions::default()
    };
    let encoded = encode(spec, &opts).unwrap();
    solve_qbf(&encoded.formula, &QbfLimits::default()).verdict
}

fn enc2_verdict(spec: &pgqbf::GameSpec, depth: Option<usize>, improvements: bool) -> Verdict {
    let opts = EncodeOptions {
        variant: EncodingVariant::Enc2,
        depth_override: depth,
        maker_breaker_auto: false,
        enc2_improvements: improvements,
        firstmoves: FirstmovesMode::Off,
        ..EncodeOptions::default()
    };
    let encoded = encode(spec, &opts).unwrap();
    solve_qbf(&encoded.formula, &QbfLimits::default()).verdict
}

#[test]
fn single_vertex_game_is_true_everywhere() {
    let g = gens::gen_lines_game(1, 1, 1, 1, 1, false).unwrap();
    assert_eq!(game_verdict(&g, None), Verdict::True);
    assert_eq!(cor_verdict(&g, None), Verdict::True);
    assert_eq!(enc2_verdict(&g, None, false), Verdict::True);
    assert_eq!(enc2_verdict(&g, None, true), Verdict::True);
}

#[test]
fn two_by_two_pair_game_agrees_at_all_depths() {
    let g = gens::gen_lines_game(2, 2, 2, 1, 1, false).unwrap();
    for depth in [2, 3, 4] {
        let expected = game_verdict(&g, Some(depth));
        assert_eq!(cor_verdict(&g, Some(depth)), expected, "cor d={depth}");
        assert_eq!(
            enc2_verdict(&g, Some(depth), false),
            expected,
            "enc2 d={depth}"
        );
    }
}

#[test]
fn hex_two_agrees() {
    let g = gens::gen_hex(2, 5).unwrap();
    let expected = game_verdict(&g, None);
    assert_eq!(expected, Verdict::True);
    assert_eq!(cor_verdict(&g, None), expected);
    assert_eq!(enc2_verdict(&g, None, false), expected);
}

#[test]
fn tic_tac_toe_full_depth_is_false() {
    let g = gens::gen_lines_game(3, 3, 3, 1, 1, false).unwrap();
    let t0 = std::time::Instant::now();
    assert_eq!(game_verdict(&g, None), Verdict::False);
    println!("oracle: {:?}", t0.elapsed());
    let t0 = std::time::Instant::now();
    assert_eq!(cor_verdict(&g, None), Verdict::False);
    println!("cor: {:?}", t0.elapsed());
}

#[test]
fn tic_tac_toe_enc2_full_depth_is_false() {
    let g = gens::gen_lines_game(3, 3, 3, 1, 1, false).unwrap();
    let t0 = std::time::Instant::now();
    assert_eq!(enc2_verdict(&g, None, false), Verdict::False);
    println!("enc2: {:?}", t0.elapsed());
}
