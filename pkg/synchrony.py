#!/usr/bin/env python
"""
synchrony <command> [flags]

Commands: transform, lightspeed, quantum, propagator, sweep.
Same as `python manage.py <command>`.
"""
from manage import main


if __name__ == '__main__':
    main()
