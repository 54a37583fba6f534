"""Command line front end and report emitters."""
