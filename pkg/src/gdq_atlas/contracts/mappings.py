"""
mappings.py - 定律名称 -> 定律陈述 / 套件 -> 定律清单

报告中每条 LawReport 都带一句可读的定律陈述，便于对照数学内容。
带标签的定律名（如 "fm_similarity:square"）按冒号前的基础名查找。

使用示例:
    from gdq_atlas.contracts import get_statement, SUITE_LAWS

    get_statement("coassociativity")
    # -> "(∂⊗id)∂ = (id⊗∂)∂ on B⟨X⟩"

    for law in SUITE_LAWS["gdq"]:
        ...
"""

from typing import Dict, Tuple

LAW_STATEMENTS: Dict[str, str] = {
    # gdq
    "mul_associativity": "(pr)s = p(rs); matrix units multiply by e_rs e_tu = δ_st e_ru",
    "mul_unit": "1·p = p·1 = p with 1 = Σ_r e_rr",
    "star_involution": "p** = p, (pr)* = r*p*, (cp)* = conj(c)p*; variables self-adjoint",
    "grade_derivation": "L − id is a derivation: L(pr) − pr = (Lp − p)r + p(Lr − r)",
    "evaluate_homomorphism": "evaluation at matrix points is multiplicative: ev(pr) = ev(p)ev(r)",
    "coassociativity": "(∂_i⊗id)∂_i = (id⊗∂_i)∂_i",
    "leibniz": "∂_i(pr) = ∂_i(p)·(1⊗r) + (p⊗1)·∂_i(r)",
    "mixed_compatibility": "(∂_i⊗id)∂_j = (id⊗∂_j)∂_i for every pair (i, j)",
    "grade_coderivation": "∂∘L = (L⊗id + id⊗L)∘∂",
    "star_coproduct": "∂(p*) = σ₁₂((∂p)*) with (x⊗y)* = x*⊗y*",
    "star_grade": "L(p*) = (Lp)*",
    "combo_gdq": "Σλ_i∂_i is coassociative and a derivation",
    "combo_compatibility": "two weighted quotients Σλ_i∂_i, Σμ_j∂_j satisfy the compatibility relation",
    "psi_recovery": "∂^(k)(n_0 X n_1 … X n_k) = n_0⊗…⊗n_k for n_j ∈ B",
    "psi_annihilation": "∂^(k)(n_0 X … X n_l) = 0 for l < k",
    # corep
    "invert_two_sided": "a·a⁻¹ = a⁻¹·a = 1 degreewise up to the truncation order",
    "corep_resolvent": "(n − X⊗I_p)⁻¹ satisfies (∂⊗id)α = α ⊗_{M_p} α",
    "corep_sandwich": "β₃(β₂ − β₁(X⊗I_p)β₃)⁻¹β₁ is a corepresentation",
    "corep_moebius_left": "(1 − ξβ)⁻¹ξ is a corepresentation when ξ is",
    "corep_moebius_right": "ξ(1 − βξ)⁻¹ is a corepresentation when ξ is",
    "moebius_symmetry": "ξ*(1 − β*ξ*)⁻¹ = ((1 − ξβ)⁻¹ξ)*",
    "unit_not_corep": "the unit matrix is not a corepresentation: defect equals p·q²",
    # lift
    "delta_intertwining": "(T⊗I_p)Δ_ij = Δ_ij(I_p⊗T) with Δ_ij = Σ_k e_ki⊗e_jk",
    "delta_forms": "lifted ∂ agrees when computed with (T⊗I_p)Δ_ij or Δ_ij(I_p⊗T)",
    "lift_leibniz": "lifted ∂ on M_p(A) is a derivation",
    "lift_coassociativity": "lifted ∂ on M_p(A) is coassociative",
    "lift_kernel": "Ker ∂ = M_p ⊗ (∩ Ker ∂_ij)",
    "lift_y": "∂Y = (I_p⊗1)⊗(I_p⊗1) for Y = Σ e_ij⊗X_ij",
    "dx_isomorphism": "Φ: D⟨X⟩ → M_p(A), X ↦ Σ e_ij⊗X_ij, is multiplicative and intertwines ∂_{X:D}",
    # resolvent
    "resolve_residual": "‖(Y⊗I_n − b)R − I‖ ≤ 1e-10·κ",
    "direct_sum_membership": "b'⊕b'' ∈ ρ_{m+n} iff b' ∈ ρ_m and b'' ∈ ρ_n",
    "direct_sum_resolve": "R_{m+n}(b'⊕b'') = R_m(b')⊕R_n(b'')",
    "conjugation_membership": "(S⊗1)ρ_n(S⊗1)⁻¹ = ρ_n for S ∈ GL(n)",
    "conjugation_resolve": "R_n((S⊗1)b(S⊗1)⁻¹) = (S⊗1)R_n(b)(S⊗1)⁻¹",
    "triangular_membership": "[[b', β],[0, b'']] ∈ ρ_{m+n} for b' ∈ ρ_m, b'' ∈ ρ_n, any β",
    "openness": "small perturbations of members stay members",
    "taylor_step": "R(b+εh) = R + εRhR + O(ε²)",
    "finiteness": "diagonal blocks of triangular members are members",
    # fm
    "set_direct_sum": "Ω_{m+n} ∩ (M_m⊕M_n) = Ω_m⊕Ω_n",
    "set_similarity": "SΩ_nS⁻¹ = Ω_n for S ∈ GL(n)",
    "fm_triangular": "[[g', γ],[0, g'']] ∈ Ω_{m+n} for g' ∈ Ω_m, g'' ∈ Ω_n",
    "fm_direct_sum": "f_{m+n}(g'⊕g'') = f_m(g')⊕f_n(g'')",
    "fm_similarity": "f_n(SgS⁻¹) = (S⊗I_H)f_n(g)(S⊗I_H)⁻¹",
    "corner_shape": "f at [[g', λγ],[0, g'']] is block upper triangular with corner linear in λ",
    "star_law": "f*_n(g) = (f_n(g*))*",
    "spectrum_similarity": "spectrum-set membership is invariant under similarity",
    "norm_monotone": "‖f‖_K ≤ ‖f‖_{K∪{pt}}",
    # dq
    "dq_leibniz": "∂(rs)(g', g'') = (r(g')⊗I)∂s(g', g'') + ∂r(g', g'')(I⊗s(g''))",
    "dq_equivariance": "∂f(S'g'S'⁻¹, S''g''S''⁻¹) = (S'⊗1)∂f(g', g'')(S''⊗1)⁻¹ on corners",
    "dq_split_left": "∂f(g₁⊕g₂, g) = ∂f(g₁, g)⊕∂f(g₂, g)",
    "dq_split_right": "∂f(g, g₁⊕g₂) = ∂f(g, g₁)⊕∂f(g, g₂)",
    "dq_order_agreement": "(id⊗∂)∂f = (∂⊗id)∂f",
    "classical_quotient": "at scalar points the difference quotient is (f(z₁) − f(z₂))/(z₁ − z₂)",
    "corner_linearity": "corner(λh) = λ·corner(h) for λ ∈ {2, −1, i}",
    "alpha_round_trip": "α(α⁻¹(map)) reproduces every unit image, (α(a⊗b))(c) = acb",
    "fd_cross_check": "single-shot second-order extraction agrees with mixed finite differences",
    # dualpos
    "positive_map": "∇f(g, g*) maps positive matrices to positive matrices",
    "completely_positive": "the Choi matrix of ∇f(g, g*) is positive semidefinite",
    "dual_positive": "f = f* and ∇f(g, g*) is positive, completely positive and block positive",
    "choi_identity": "the identity map is completely positive",
    "choi_transpose": "the transpose map is positive but not completely positive (min Choi eigenvalue −1)",
    # utransform
    "u_direct_sum": "U_{m+n}(φ)(b'⊕b'') = U_m(φ)(b')⊕U_n(φ)(b'')",
    "entry_product": "corner entries of the resolvent at [[b₁, x],[0, b₂]] are products of resolvent entries",
    "approx_inverse": "λ(λb − Y)⁻¹ → b⁻¹ with error O(1/λ)",
    "approx_y": "ε⁻¹(ε⁻¹(ε⁻¹ − Y)⁻¹ − ε⁻²(ε⁻² − Y)⁻¹) → Y with error O(ε)",
    "dual_mul": "Σ_j (φ⊗ψ)(R_ij⊗R_jk) = (U(φ)U(ψ))_ik",
    "pairing": "(φ⊗id⊗id)(R_m(b₁) ⊗_E R_n(b₂)) = −∂_{m,n}U(φ)(b₁; b₂)",
    "trace_flip": "∂U(φ) is flip-symmetric iff φ vanishes on commutators of resolvent entries",
    "star_intertwining": "U(φ*) = U(φ)*",
    "forward_positivity": "φ ≥ 0 implies −U(φ) is dual positive",
    "converse_witness": "φ not positive yields a dual-positivity witness for −U(φ)",
    "normalization": "N·U_1(φ)(N·1) → φ(1) with error O(1/N)",
    "u_injectivity": "rank of W ↦ U(W) equals the dimension of the algebra generated by B and Y",
    # any suite
    "suite_error": "the suite ran to completion without raising",
}

SUITE_LAWS: Dict[str, Tuple[str, ...]] = {
    "gdq": (
        "mul_associativity", "mul_unit", "star_involution", "grade_derivation",
        "evaluate_homomorphism", "coassociativity", "leibniz", "mixed_compatibility",
        "grade_coderivation", "star_coproduct", "star_grade", "combo_gdq",
        "combo_compatibility", "psi_recovery", "psi_annihilation",
    ),
    "corep": (
        "invert_two_sided", "corep_resolvent", "corep_sandwich", "corep_moebius_left",
        "corep_moebius_right", "moebius_symmetry", "unit_not_corep",
    ),
    "lift": (
        "delta_intertwining", "delta_forms", "lift_leibniz", "lift_coassociativity",
        "lift_kernel", "lift_y", "dx_isomorphism",
    ),
    "resolvent": (
        "resolve_residual", "direct_sum_membership", "direct_sum_resolve",
        "conjugation_membership", "conjugation_resolve", "triangular_membership",
        "openness", "taylor_step", "finiteness",
    ),
    "fm": (
        "set_direct_sum", "set_similarity", "fm_triangular", "fm_direct_sum", "fm_similarity", "corner_shape",
        "star_law", "spectrum_similarity", "norm_monotone",
    ),
    "dq": (
        "dq_leibniz", "dq_equivariance", "dq_split_left", "dq_split_right",
        "dq_order_agreement", "classical_quotient", "corner_linearity",
        "alpha_round_trip", "fd_cross_check",
    ),
    "dualpos": (
        "choi_identity", "choi_transpose", "positive_map", "completely_positive", "dual_positive",
    ),
    "utransform": (
        "u_direct_sum", "entry_product", "approx_inverse", "approx_y", "dual_mul",
        "pairing", "trace_flip", "star_intertwining", "forward_positivity",
        "converse_witness", "normalization", "u_injectivity",
    ),
}


def base_law(name: str) -> str:
    """去掉标签后缀: "fm_similarity:square" -> "fm_similarity" """
    return name.split(":", 1)[0]


def get_statement(law: str) -> str:
    """根据定律名称获取陈述

    Args:
        law: 定律名称（可带 ":标签" 后缀）

    Returns:
        定律陈述字符串

    Raises:
        ValueError: 定律名称不存在时抛出
    """
    key = base_law(law)
    if key not in LAW_STATEMENTS:
        raise ValueError(f"Unknown law: {law}. Available: {sorted(LAW_STATEMENTS)}")
    return LAW_STATEMENTS[key]


def get_suite_laws(suite: str) -> Tuple[str, ...]:
    """根据套件名称获取定律清单

    Raises:
        ValueError: 套件名称不存在时抛出
    """
    if suite not in SUITE_LAWS:
        raise ValueError(f"Unknown suite: {suite}. Available: {sorted(SUITE_LAWS)}")
    return SUITE_LAWS[suite]
