__VERSION__ = "0.2.0"
