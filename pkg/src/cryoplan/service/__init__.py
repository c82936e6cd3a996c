"""HTTP service exposing scenario solving and noise inference."""
