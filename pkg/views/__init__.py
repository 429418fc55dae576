# Subcommand views; each module exposes register(subparsers)
