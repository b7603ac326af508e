import json

from contactgeom import conf, reports
from contactgeom.connection import deform
from contactgeom.exceptions import NoConvergence
from contactgeom.solver import Objective, SolverOptions, solve

from ._base import ContactCommand


class Command(ContactCommand):
    help = 'Search base + S for a connection meeting a curvature objective'

    def add_arguments(self, parser):
        parser.add_argument('path', type=str, help='Path to the model document (.json)')
        parser.add_argument('--objective', choices=('flat', 'ricci', 'reeb', 'normal'), default='flat',
                            help='Curvature target (default: flat)')
        parser.add_argument('--restarts', type=int, default=20, help='Number of restarts (default: 20)')
        parser.add_argument('--seed', type=int, default=0, help='Restart seed (default: 0)')
        parser.add_argument('--max-den', type=int, default=1000, help='Denominator bound for rationalization')
        parser.add_argument('--max-iterations', type=int, default=200, help='Iterations per restart')
        parser.add_argument('--progress', action='store_true', help='Stream JSON progress events to stderr')
        super().add_arguments(parser)

    def run(self, *args, **options):
        loaded = self.load(options['path'])
        objective = Objective(options['objective'])
        solver_options = SolverOptions(
            max_iterations=options['max_iterations'],
            restarts=options['restarts'],
            seed=options['seed'],
            max_denominator=options['max_den'],
            workers=conf.workers(),
        )
        progress = None
        if options['progress']:
            def progress(event):
                self.stderr.write(json.dumps(event))

        report = self.base_report(loaded)
        try:
            solution = solve(loaded.model, loaded.gamma, objective, solver_options, progress=progress)
        except NoConvergence as exc:
            report['solver'] = reports.solver_section(loaded.model, objective, solver_options, exc.best)
            self.emit(report)
            raise
        report['solver'] = reports.solver_section(loaded.model, objective, solver_options, solution)
        if solution.rationalized is not None:
            connection = deform(loaded.model, loaded.gamma, solution.rationalized)
            report['connection'] = reports.table_section(loaded.model, connection)
        self.emit(report, summary=f'{loaded.model.name}: residual {solution.residual_norm:.3e}, '
                                  f'exact={solution.exact}')
