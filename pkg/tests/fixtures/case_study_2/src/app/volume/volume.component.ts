import { ChangeDetectionStrategy, Component } from '@angular/core';
import { BehaviorSubject, interval, of } from 'rxjs';
import { map } from 'rxjs/operators';

@Component({
  selector: 'app-volume',
  template: `
    <input type="range" min="0" max="100" [value]="level$ | async" (input)="set($any($event.target).valueAsNumber)" />
    <span>{{ percent$ | async }}</span>
    <mat-icon *ngIf="muted$ | async">volume_off</mat-icon>
  `,
  changeDetection: ChangeDetectionStrategy.OnPush,
})
export class VolumeComponent {
  readonly level$ = new BehaviorSubject(50);
  // expect: no-unused-observables
  tick$ = interval(1000);
  // expect: no-unused-observables
  private orphan$ = of(1, 2, 3);

  // expect: prefer-signal
  readonly muted$ = this.level$.pipe(map(level => level === 0));
  // expect: prefer-signal
  readonly percent$ = this.level$.pipe(map(level => `${level}%`));

  set(level: number) {
    this.level$.next(level);
  }
}
