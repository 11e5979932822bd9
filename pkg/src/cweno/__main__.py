import sys

from cweno.cli import main

sys.exit(main())
