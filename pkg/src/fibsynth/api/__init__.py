"""HTTP service and the request handlers it shares with the CLI."""
