import { ChangeDetectionStrategy, Component } from '@angular/core';
import { timer } from 'rxjs';
import { map } from 'rxjs/operators';

@Component({
  selector: 'app-clock',
  template: `<time>{{ now$ | async | date: 'HH:mm:ss' }}</time>`,
  changeDetection: ChangeDetectionStrategy.OnPush,
})
export class ClockComponent {
  readonly now$ = timer(0, 1000).pipe(map(() => new Date()));
}
