"""Natural-language querying for GA4GH Beacon v2 endpoints.

The package turns free-text questions into validated Beacon v2 queries via
pluggable LLM backends, executes them against a Beacon endpoint with the
caller's own bearer token, and supports guarded code-generation analytics
over record results. Every extracted field passes a human confirmation
checkpoint before any data access.
"""

__version__ = "0.1.0"
