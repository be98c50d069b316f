"""
Service layer: F2 algebra, knot input, staircases, mapping cones, obstructions and orchestration.
"""
