//! Property tests for the q-polynomial algebra over a few small towers.

use linset_core::field::{build_field, FElem, FieldCtx};
use linset_core::projline::{perp, poly_of_subspace, subspace_of_poly};
use linset_core::qpoly::{adjoint, compose, dickson_matrix, evaluate, kernel_dimension, QPoly};
use proptest::prelude::*;

fn contexts() -> Vec<FieldCtx> {
    vec![
        build_field(2, 1, 3, None).unwrap(),
        build_field(3, 1, 3, None).unwrap(),
        build_field(2, 2, 2, None).unwrap(),
        build_field(2, 1, 4, None).unwrap(),
    ]
}

fn poly_from_encoding(ctx: &FieldCtx, enc: u64) -> QPoly {
    let mut rest = enc;
    QPoly::new(
        ctx,
        (0..ctx.n())
            .map(|_| {
                let c = FElem(rest % ctx.size());
                rest /= ctx.size();
                c
            })
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_evaluates_pointwise(fe in 0u64..4096, ge in 0u64..4096, xe in 0u64..4096) {
        for ctx in contexts() {
            let f = poly_from_encoding(&ctx, fe);
            let g = poly_from_encoding(&ctx, ge);
            let x = FElem(xe % ctx.size());
            let fg = compose(&ctx, &f, &g);
            prop_assert_eq!(
                evaluate(&ctx, &fg, x),
                evaluate(&ctx, &f, evaluate(&ctx, &g, x))
            );
        }
    }

    #[test]
    fn adjoint_involution_and_rank(fe in 0u64..4096) {
        for ctx in contexts() {
            let f = poly_from_encoding(&ctx, fe);
            let fh = adjoint(&ctx, &f);
            prop_assert_eq!(adjoint(&ctx, &fh), f.clone());
            prop_assert_eq!(
                dickson_matrix(&ctx, &f).rank(&ctx) + kernel_dimension(&ctx, &f),
                ctx.n()
            );
            prop_assert_eq!(kernel_dimension(&ctx, &f), kernel_dimension(&ctx, &fh));
        }
    }

    #[test]
    fn graph_roundtrip_and_double_perp(fe in 0u64..4096) {
        for ctx in contexts() {
            let f = poly_from_encoding(&ctx, fe);
            let u = subspace_of_poly(&ctx, &f);
            prop_assert_eq!(poly_of_subspace(&ctx, &u).unwrap(), f.clone());
            let d = perp(&ctx, &u);
            prop_assert_eq!(d.dim(), ctx.n());
            prop_assert_eq!(perp(&ctx, &d), u);
            prop_assert_eq!(d, subspace_of_poly(&ctx, &adjoint(&ctx, &f)));
        }
    }
}
