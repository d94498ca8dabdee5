import { ChangeDetectionStrategy, Component, input, output } from '@angular/core';

export interface UserSummary {
  id: string;
  name: string;
}

@Component({
  selector: 'app-user-card',
  standalone: true,
  template: `<article (click)="selected.emit(user().id)">{{ user().name }}</article>`,
  changeDetection: ChangeDetectionStrategy.OnPush,
})
export class UserCardComponent {
  readonly user = input.required<UserSummary>();
  readonly selected = output<string>();
}
