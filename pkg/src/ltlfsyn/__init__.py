"""On-the-fly LTLf realizability checking and synthesis."""
