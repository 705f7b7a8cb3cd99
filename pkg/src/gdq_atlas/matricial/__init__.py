"""gdq_atlas.matricial - 预解集、全矩阵函数、矩阵差商与对偶"""
