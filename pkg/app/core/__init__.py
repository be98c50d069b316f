"""
Core plumbing: settings, error codes, structured logging and the dependency container.
"""
