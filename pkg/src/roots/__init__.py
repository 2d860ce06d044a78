"""
Root Finding

Quadtree exclusion, Newton polishing and root classification
(src.roots.root_finder).
"""
