import sys

from virtimu.cli.main import main

sys.exit(main())
