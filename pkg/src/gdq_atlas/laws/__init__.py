"""gdq_atlas.laws - 定律报告与采样"""
