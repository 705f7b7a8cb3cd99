"""gdq_atlas.pipeline - 运行台账"""
