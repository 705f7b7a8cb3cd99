"""gdq_atlas.algebra - 非交换多项式与差商余代数"""
