"""HTTP front end over the harness operations."""
